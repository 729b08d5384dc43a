#include "cmrt/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cmrt/coeff_tables.hpp"
#include "cmrt/forward.hpp"
#include "cmrt/inversion.hpp"
#include "cmrt/mean_field.hpp"

namespace cmrt {
namespace {

using Clock = std::chrono::steady_clock;

struct ReferenceEntry {
  char family;
  int k, i;
  std::vector<std::string> coeffs;
};

// Reference coefficient listing through order 3 (as published). The first
// coefficient of B(5,3) is the one entry the recurrence contradicts; the
// discrepancy record carries both values.
const std::vector<ReferenceEntry>& reference_table() {
  static const std::vector<ReferenceEntry> table = {
      {'B', 1, 1, {"-2"}},
      {'A', 1, 0, {"-4"}},
      {'A', 1, 1, {"-2", "2"}},
      {'B', 2, 1, {"6", "-12"}},
      {'B', 2, 2, {"1", "-2", "1"}},
      {'A', 2, 0, {"8", "-24"}},
      {'A', 2, 1, {"4", "-16", "12"}},
      {'A', 2, 2, {"1/3", "-1", "1", "-1/3"}},
      {'B', 3, 1, {"-10", "60", "-60"}},
      {'B', 3, 2, {"-2/3", "10", "-15", "20/3"}},
      {'B', 3, 3, {"-1/12", "1/3", "-1/2", "1/3", "-1/12"}},
  };
  return table;
}

Phantom reference_phantom() {
  return Phantom({Bump{BumpKind::Gaussian, 0.3, 1.2, 0.15, 1.0}});
}

CheckResult check_golden_table() {
  const auto t0 = Clock::now();
  CheckResult res{"golden-table", true, "", 0.0};
  const CoeffTables tables = build_tables(3);
  const auto discrepancies = known_discrepancies(tables);
  std::ostringstream detail;
  int compared = 0;
  for (const auto& ref : reference_table()) {
    const RationalCoeffs& got =
        (ref.family == 'A') ? tables.a(ref.k, ref.i) : tables.b(ref.k, ref.i);
    if (got.size() != ref.coeffs.size()) {
      res.passed = false;
      detail << ref.family << "(" << ref.k << "," << ref.i << ") size; ";
      continue;
    }
    for (size_t m = 0; m < got.size(); ++m) {
      ++compared;
      const Rational want = rational_from_string(ref.coeffs[m]);
      if (got[m] == want) continue;
      // a mismatch is acceptable only where a discrepancy is on record,
      // with exactly these two values
      const std::string key =
          (ref.family == 'A')
              ? "A/" + std::to_string(2 * ref.k) + "/" + std::to_string(2 * ref.i)
              : "B/" + std::to_string(2 * ref.k - 1) + "/" +
                    std::to_string(2 * ref.i - 1);
      bool recorded = false;
      for (const auto& d : discrepancies)
        if (d.entry == key && d.coefficient_index == static_cast<int>(m) + 1 &&
            d.computed == got[m] && d.printed == want)
          recorded = true;
      if (!recorded) {
        res.passed = false;
        detail << key << "[" << m + 1 << "] = " << to_fraction_string(got[m])
               << " want " << ref.coeffs[m] << "; ";
      }
    }
  }
  if (discrepancies.size() != 1 || discrepancies[0].entry != "B/5/3" ||
      discrepancies[0].computed != Rational(-5, 3) ||
      discrepancies[0].printed != Rational(-2, 3)) {
    res.passed = false;
    detail << "discrepancy record wrong; ";
  }
  if (res.passed)
    detail << compared << " coefficients match, 1 recorded discrepancy "
           << "(B/5/3: -5/3 vs printed -2/3)";
  res.detail = detail.str();
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

CheckResult check_endpoint_identities() {
  const auto t0 = Clock::now();
  CheckResult res{"endpoint-identities", true, "", 0.0};
  constexpr int kMax = 12;
  const CoeffTables tables = build_tables(kMax);
  std::ostringstream detail;
  auto coeff_sum = [](const RationalCoeffs& c) {
    Rational s(0);
    for (const Rational& v : c) s += v;
    return s;
  };
  for (int k = 1; k <= kMax; ++k) {
    if (coeff_sum(tables.a(k, 0)) != Rational(-4 * k * k)) {
      res.passed = false;
      detail << "A(" << 2 * k << ",0) sum; ";
    }
    for (int i = 1; i <= k; ++i)
      if (coeff_sum(tables.a(k, i)) != 0) {
        res.passed = false;
        detail << "A(" << 2 * k << "," << 2 * i << ") sum; ";
      }
    if (coeff_sum(tables.b(k, 1)) != Rational(-2 * (2 * k - 1))) {
      res.passed = false;
      detail << "B(" << 2 * k - 1 << ",1) sum; ";
    }
    for (int i = 2; i <= k; ++i)
      if (coeff_sum(tables.b(k, i)) != 0) {
        res.passed = false;
        detail << "B(" << 2 * k - 1 << "," << 2 * i - 1 << ") sum; ";
      }
  }
  if (res.passed) detail << "all sums exact through order " << kMax;
  res.detail = detail.str();
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

CheckResult check_oracle_equivalence() {
  const auto t0 = Clock::now();
  CheckResult res{"oracle-equivalence", true, "", 0.0};
  const CoeffTables tables = build_tables(4);
  const Phantom phantom = reference_phantom();
  const AnalyticMeanField field(phantom, 2048);
  const double peak = phantom.peak();
  const std::vector<std::pair<double, double>> points = {
      {0.23, 1.41}, {0.42, 1.10}, {0.31, 1.27}, {0.14, 0.95}};
  double worst = 0.0;
  std::ostringstream detail;
  for (const auto& [p, r] : points)
    for (int k = 1; k <= 3; ++k) {
      const auto [af, bf] = restriction_fourier(phantom, p, r, 2 * k, 4096);
      const auto [af2, bf2] =
          restriction_fourier(phantom, p, r, 2 * k - 1, 4096);
      const double al = a_even_lemma(tables, field, p, r, k, 160);
      const double bl = b_odd_lemma(tables, field, p, r, k, 160);
      const double ea =
          std::abs(al - af) / std::max(std::abs(af), 1e-12 * peak);
      const double eb =
          std::abs(bl - bf2) / std::max(std::abs(bf2), 1e-12 * peak);
      worst = std::max({worst, ea, eb});
      if (ea > 1e-6 || eb > 1e-6) {
        res.passed = false;
        detail << "(p=" << p << ",r=" << r << ",k=" << k << ") rel " << ea
               << "/" << eb << "; ";
      }
    }
  if (res.passed)
    detail << "a/b coefficients match direct Fourier restriction, worst rel "
           << worst;
  res.detail = detail.str();
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

CheckResult check_consistency_residual() {
  const auto t0 = Clock::now();
  CheckResult res{"consistency-residual", true, "", 0.0};
  const Phantom phantom = reference_phantom();
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> up(-0.7, 1.3), ur(0.05, 2.5),
      uphi(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double p = up(rng), r = ur(rng), phi = uphi(rng);
    const FlagDerivatives d = flag_derivatives(phantom, p, r, phi);
    const double scale = std::abs(d.f_p * r) +
                         std::abs(d.f_r * r * std::sin(phi)) +
                         std::abs(d.f_phi * std::cos(phi)) + 1e-30;
    const double rel = std::abs(consistency_residual(phantom, p, r, phi)) / scale;
    worst = std::max(worst, rel);
  }
  res.passed = worst <= 1e-8;
  std::ostringstream detail;
  detail << "worst residual / derivative scale = " << worst << " over 100 flags";
  res.detail = detail.str();
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> results;
  results.push_back(check_golden_table());
  results.push_back(check_endpoint_identities());
  results.push_back(check_oracle_equivalence());
  results.push_back(check_consistency_residual());
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace cmrt
