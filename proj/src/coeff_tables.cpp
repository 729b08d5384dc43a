#include "cmrt/coeff_tables.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace cmrt {
namespace {

// The two recurrence steps below generate the closed-form coefficient
// relations obtained by substituting the polynomial representations of the
// lower-order a/b series coefficients into their Volterra recursions,
// swapping the order of integration and integrating monomials. Sums over
// out-of-range indices vanish, which the zero-extended accessors encode, so
// each step is a single uniform double loop plus the boundary constant that
// the direct (non-integral) source terms contribute to the top power.

std::string entry_key(char family, int k, int i) {
  if (family == 'A')
    return "A/" + std::to_string(2 * k) + "/" + std::to_string(2 * i);
  return "B/" + std::to_string(2 * k - 1) + "/" + std::to_string(2 * i - 1);
}

}  // namespace

const RationalCoeffs& CoeffTables::a(int k, int i) const {
  auto it = a_.find({k, i});
  if (it == a_.end())
    throw MissingEntryError("missing table entry " + entry_key('A', k, i));
  return it->second;
}

const RationalCoeffs& CoeffTables::b(int k, int i) const {
  auto it = b_.find({k, i});
  if (it == b_.end())
    throw MissingEntryError("missing table entry " + entry_key('B', k, i));
  return it->second;
}

Rational CoeffTables::a_coeff(int k, int i, int m) const {
  if (k <= 0 || i < 0 || i > k) return Rational(0);
  auto it = a_.find({k, i});
  if (it == a_.end() || m < 1 || m > static_cast<int>(it->second.size()))
    return Rational(0);
  return it->second[m - 1];
}

Rational CoeffTables::b_coeff(int k, int i, int m) const {
  if (k <= 0 || i < 1 || i > k) return Rational(0);
  auto it = b_.find({k, i});
  if (it == b_.end() || m < 1 || m > static_cast<int>(it->second.size()))
    return Rational(0);
  return it->second[m - 1];
}

CoeffTables base_tables() {
  CoeffTables t;
  t.b_[{1, 1}] = {Rational(-2)};
  t.a_[{1, 0}] = {Rational(-4)};
  t.a_[{1, 1}] = {Rational(-2), Rational(2)};
  t.max_a_order_ = 1;
  t.max_b_order_ = 1;
  return t;
}

void step_b(CoeffTables& tables, int k) {
  if (k < 1 || tables.max_a_order_ < k || tables.max_b_order_ < k)
    throw MissingEntryError("step_b(" + std::to_string(k) +
                            ") requires tables populated through order " +
                            std::to_string(k));
  for (int i = 1; i <= k + 1; ++i) {
    const int n_coeffs = k + i;  // regular powers m = 1..k+i-1, top m = k+i
    RationalCoeffs out(n_coeffs, Rational(0));
    Rational top(0);
    for (int m = 1; m <= k + i - 1; ++m) {
      Rational num(0);
      for (int j = i - 1; j <= k; ++j) {
        if (j >= i) num += Rational(2 * j - 1) * tables.b_coeff(j, i, m);
        num += tables.a_coeff(j, i - 1, m);
      }
      out[m - 1] -= num / (k + i - m);
      top += num / (k + i - m);
    }
    if (i == 1) top -= Rational(2 * (2 * k + 1));
    out[n_coeffs - 1] += top;
    tables.b_[{k + 1, i}] = std::move(out);
  }
  tables.max_b_order_ = std::max(tables.max_b_order_, k + 1);
}

void step_a(CoeffTables& tables, int k) {
  if (k < 1 || tables.max_a_order_ < k || tables.max_b_order_ < k + 1)
    throw MissingEntryError("step_a(" + std::to_string(k) +
                            ") requires A through order " + std::to_string(k) +
                            " and B through order " + std::to_string(k + 1));
  for (int i = 0; i <= k + 1; ++i) {
    const int n_coeffs = k + 1 + i;  // regular m = 1..k+i, top m = k+i+1
    RationalCoeffs out(n_coeffs, Rational(0));
    Rational top(0);
    for (int m = 1; m <= k + i; ++m) {
      Rational num(0);
      for (int j = i; j <= k + 1; ++j) {
        if (j <= k) num -= Rational(2 * j) * tables.a_coeff(j, i, m);
        if (i >= 1) num += tables.b_coeff(j, i, m);
      }
      out[m - 1] += num / (k + i - m + 1);
      top -= num / (k + i - m + 1);
    }
    if (i == 0) top -= Rational(4) * (k + 1) * (k + 1);
    out[n_coeffs - 1] += top;
    tables.a_[{k + 1, i}] = std::move(out);
  }
  tables.max_a_order_ = std::max(tables.max_a_order_, k + 1);
}

CoeffTables build_tables(int n_max) {
  if (n_max < 1) throw std::invalid_argument("build_tables: n_max must be >= 1");
  CoeffTables t = base_tables();
  for (int k = 1; k < n_max; ++k) {
    step_b(t, k);
    step_a(t, k);
  }
  return t;
}

RationalCoeffs z_coefficients(const CoeffTables& tables, int n, int i) {
  if (i < 0 || i > n)
    throw std::out_of_range("z_coefficients: need 0 <= i <= n, got i=" +
                            std::to_string(i) + " n=" + std::to_string(n));
  if (tables.max_a_order() < n)
    throw std::out_of_range("z_coefficients: tables populated to order " +
                            std::to_string(tables.max_a_order()) +
                            ", need " + std::to_string(n));
  RationalCoeffs out;
  out.reserve(n + i);
  for (int j = 1; j <= n + i; ++j) {
    Rational s(0);
    for (int k = std::max({i, j - i, 1}); k <= n; ++k)
      s += tables.a_coeff(k, i, j);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Discrepancy> known_discrepancies(const CoeffTables& tables) {
  std::vector<Discrepancy> out;
  if (tables.has_b(3, 2)) {
    out.push_back(Discrepancy{
        "B/5/3", 1, tables.b_coeff(3, 2, 1), Rational(-2, 3),
        "the recurrence and an independent exact integration both give "
        "-5/3; the reference listing prints -2/3, which also violates the "
        "endpoint identity sum_m B_m(5,3) = 0"});
  }
  return out;
}

std::string tables_to_json(const CoeffTables& tables) {
  nlohmann::ordered_json doc;
  doc["max_order"] = tables.max_order();
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (int k = 1; k <= tables.max_a_order(); ++k)
    for (int i = 0; i <= k; ++i) {
      if (!tables.has_a(k, i)) continue;
      std::vector<std::string> coeffs;
      for (const Rational& c : tables.a(k, i))
        coeffs.push_back(to_fraction_string(c));
      entries[entry_key('A', k, i)] = coeffs;
    }
  for (int k = 1; k <= tables.max_b_order(); ++k)
    for (int i = 1; i <= k; ++i) {
      if (!tables.has_b(k, i)) continue;
      std::vector<std::string> coeffs;
      for (const Rational& c : tables.b(k, i))
        coeffs.push_back(to_fraction_string(c));
      entries[entry_key('B', k, i)] = coeffs;
    }
  doc["entries"] = std::move(entries);
  nlohmann::ordered_json disc = nlohmann::ordered_json::array();
  for (const Discrepancy& d : known_discrepancies(tables)) {
    disc.push_back({{"entry", d.entry},
                    {"coefficient_index", d.coefficient_index},
                    {"computed", to_fraction_string(d.computed)},
                    {"printed", to_fraction_string(d.printed)},
                    {"note", d.note}});
  }
  doc["known_discrepancies"] = std::move(disc);
  return doc.dump(2) + "\n";
}

}  // namespace cmrt
