#include "cmrt/inversion.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>
#include <tuple>

#include "cmrt/quadrature.hpp"

namespace cmrt {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_p_derivatives(const MeanField& field, int order) {
  if (order > field.max_p_derivative())
    throw UnsupportedDerivative(
        "field supplies p-derivatives up to order " +
        std::to_string(field.max_p_derivative()) + ", need " +
        std::to_string(order));
}

}  // namespace

std::vector<double> ReconstructionReport::abs_errors() const {
  std::vector<double> out;
  if (!true_value) return out;
  out.reserve(f_by_order.size());
  for (double v : f_by_order) out.push_back(std::abs(v - *true_value));
  return out;
}

KernelBank::KernelBank(const CoeffTables& tables, int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("KernelBank: n_max must be >= 0");
  z_.reserve((n_max + 1) * (n_max + 2) / 2);
  for (int n = 0; n <= n_max; ++n)
    for (int i = 0; i <= n; ++i)
      z_.push_back(OddPolynomial::from_exact(z_coefficients(tables, n, i)));
}

const OddPolynomial& KernelBank::z(int n, int i) const {
  if (n < 0 || n > n_max_ || i < 0 || i > n)
    throw std::out_of_range("KernelBank::z index out of range");
  return z_[n * (n + 1) / 2 + i];
}

double a_even_lemma(const CoeffTables& tables, const MeanField& field,
                    double p, double r, int k, int radial_nodes) {
  if (k < 1) throw std::invalid_argument("a_even_lemma: k must be >= 1");
  if (r < 0.0) throw std::invalid_argument("a_even_lemma: r must be >= 0");
  require_p_derivatives(field, 2 * k);
  double total = 2.0 * field.value(p, r);
  if (r == 0.0) return total;
  const GaussLegendre& gl = gauss_legendre_unit(radial_nodes);
  double r_pow = 1.0;  // r^(2i)
  for (int i = 0; i <= k; ++i) {
    const OddPolynomial kernel = OddPolynomial::from_exact(tables.a(k, i));
    double integral = 0.0;
    for (int q = 0; q < radial_nodes; ++q)
      integral += gl.weights[q] * kernel(gl.nodes[q]) *
                  field.deriv_p(p, r * gl.nodes[q], 2 * i);
    total += r_pow * integral;
    r_pow *= r * r;
  }
  return total;
}

double b_odd_lemma(const CoeffTables& tables, const MeanField& field, double p,
                   double r, int k, int radial_nodes) {
  if (k < 1) throw std::invalid_argument("b_odd_lemma: k must be >= 1");
  if (r <= 0.0) return 0.0;
  require_p_derivatives(field, 2 * k - 1);
  const GaussLegendre& gl = gauss_legendre_unit(radial_nodes);
  double total = 0.0;
  double r_pow = r;  // r^(2i-1)
  for (int i = 1; i <= k; ++i) {
    const OddPolynomial kernel = OddPolynomial::from_exact(tables.b(k, i));
    double integral = 0.0;
    for (int q = 0; q < radial_nodes; ++q)
      integral += gl.weights[q] * kernel(gl.nodes[q]) *
                  field.deriv_p(p, r * gl.nodes[q], 2 * i - 1);
    total += r_pow * integral;
    r_pow *= r * r;
  }
  return total;
}

namespace {

// Collocation solver for the nested Volterra recursion. Every coefficient
// function u -> d_p^shift a_{2k}(p, u) (resp. b) is tabulated on
// Chebyshev-Lobatto nodes over [0, r] and, once built, resampled by
// barycentric interpolation onto the shared inner-quadrature grid, so every
// consumer reads array entries instead of re-interpolating. Direct field
// terms are memoized per (derivative order, radius).
class RecursionEngine {
 public:
  RecursionEngine(const MeanField& field, double p, double r,
                  const RecursionOptions& opts)
      : field_(field),
        p_(p),
        r_(r),
        gl_(gauss_legendre_unit(opts.quad_nodes)),
        m_(opts.collocation_nodes),
        ng_(opts.quad_nodes) {
    nodes_.resize(m_ + 1);
    bary_.resize(m_ + 1);
    for (int q = 0; q <= m_; ++q) {
      nodes_[q] = r_ * (1.0 - std::cos(std::numbers::pi * q / m_)) / 2.0;
      bary_[q] = (q % 2 == 0) ? 1.0 : -1.0;
    }
    bary_.front() *= 0.5;
    bary_.back() *= 0.5;
    // inner integration points v = u_q * t_g, shared by all functions
    quad_v_.resize(static_cast<size_t>(m_) * ng_);
    for (int q = 1; q <= m_; ++q)
      for (int g = 0; g < ng_; ++g)
        quad_v_[(q - 1) * ng_ + g] = nodes_[q] * gl_.nodes[g];
  }

  double a_at_r(int k) { return func('a', k, 0).at_nodes.back(); }
  double b_at_r(int k) { return func('b', k, 0).at_nodes.back(); }

 private:
  struct FuncData {
    std::vector<double> at_nodes;  // values on the collocation grid
    std::vector<double> at_quad;   // values at the shared quadrature points
  };

  double field_p(int d, double u) {
    auto [it, fresh] =
        gcache_.try_emplace({d, std::bit_cast<std::uint64_t>(u)}, 0.0);
    if (fresh) it->second = field_.deriv_p(p_, u, d);
    return it->second;
  }
  double field_pr(int d, double u) {
    auto [it, fresh] =
        grcache_.try_emplace({d, std::bit_cast<std::uint64_t>(u)}, 0.0);
    if (fresh) it->second = field_.deriv_r(p_, u, d);
    return it->second;
  }

  double interp(const std::vector<double>& vals, double u) const {
    double num = 0.0, den = 0.0;
    for (int q = 0; q <= m_; ++q) {
      const double d = u - nodes_[q];
      if (d == 0.0) return vals[q];
      const double t = bary_[q] / d;
      num += t * vals[q];
      den += t;
    }
    return num / den;
  }

  const FuncData& func(char kind, int k, int d) {
    const auto key = std::make_tuple(kind, k, d);
    if (auto it = funcs_.find(key); it != funcs_.end()) return it->second;

    std::vector<const FuncData*> a_deps, b_deps;
    if (kind == 'a') {
      for (int j = 1; j < k; ++j) a_deps.push_back(&func('a', j, d));
      for (int j = 1; j <= k; ++j) b_deps.push_back(&func('b', j, d + 1));
    } else if (k > 1) {
      for (int j = 1; j < k; ++j) b_deps.push_back(&func('b', j, d));
      for (int j = 1; j < k; ++j) a_deps.push_back(&func('a', j, d + 1));
    }

    FuncData data;
    data.at_nodes.assign(m_ + 1, 0.0);
    for (int q = 1; q <= m_; ++q) {
      double acc = 0.0;
      for (int g = 0; g < ng_; ++g) {
        const size_t vi = (q - 1) * static_cast<size_t>(ng_) + g;
        const double t = gl_.nodes[g];
        const double v = quad_v_[vi];
        double integrand;
        if (kind == 'b' && k == 1) {
          // (1/u) int_0^u -2 v G_{d+1}(v) dv
          integrand = -2.0 * v * field_p(d + 1, v);
        } else if (kind == 'a') {
          // u^{-2k} int_0^u v^{2k-1} [2v dMf_d/du - sum 4j a_{2j}
          //                           + 2v sum (b_{2j-1})'_p] dv
          double inner = 2.0 * v * field_pr(d, v);
          for (int j = 1; j < k; ++j)
            inner -= 4.0 * j * a_deps[j - 1]->at_quad[vi];
          double bsum = 0.0;
          for (int j = 1; j <= k; ++j) bsum += b_deps[j - 1]->at_quad[vi];
          inner += 2.0 * v * bsum;
          integrand = std::pow(t, 2 * k - 1) * inner;
        } else {
          // u^{-(2k-1)} int_0^u v^{2k-2} [-2v G_{d+1}(v)
          //     - sum 2(2j-1) b_{2j-1} - 2v sum (a_{2j})'_p] dv
          double inner = -2.0 * v * field_p(d + 1, v);
          for (int j = 1; j < k; ++j)
            inner -= 2.0 * (2 * j - 1) * b_deps[j - 1]->at_quad[vi];
          double asum = 0.0;
          for (int j = 1; j < k; ++j) asum += a_deps[j - 1]->at_quad[vi];
          inner -= 2.0 * v * asum;
          integrand = std::pow(t, 2 * k - 2) * inner;
        }
        acc += gl_.weights[g] * integrand;
      }
      // all u- and v-powers reduce to powers of t = v/u, so the nested
      // integral collapses to the weighted mean accumulated above
      data.at_nodes[q] = acc;
    }
    data.at_quad.resize(quad_v_.size());
    for (size_t vi = 0; vi < quad_v_.size(); ++vi)
      data.at_quad[vi] = interp(data.at_nodes, quad_v_[vi]);
    return funcs_.emplace(key, std::move(data)).first->second;
  }

  const MeanField& field_;
  double p_, r_;
  const GaussLegendre& gl_;
  int m_, ng_;
  std::vector<double> nodes_, bary_, quad_v_;
  std::map<std::tuple<char, int, int>, FuncData> funcs_;
  std::map<std::pair<int, std::uint64_t>, double> gcache_, grcache_;
};

}  // namespace

CoefficientSet coeffs_recursive(const MeanField& field, double p, double r,
                                int k_max, const RecursionOptions& opts) {
  if (k_max < 1) throw std::invalid_argument("coeffs_recursive: k_max >= 1");
  if (k_max > opts.max_depth)
    throw std::invalid_argument(
        "coeffs_recursive: depth " + std::to_string(k_max) +
        " exceeds the configured limit " + std::to_string(opts.max_depth));
  if (!field.is_analytic())
    throw std::invalid_argument(
        "coeffs_recursive requires an analytic field (radial derivatives)");
  require_p_derivatives(field, 2 * k_max);
  if (r < 0.0) throw std::invalid_argument("coeffs_recursive: r must be >= 0");

  CoefficientSet out;
  out.a.assign(k_max, 0.0);
  out.b.assign(k_max, 0.0);
  if (r == 0.0) return out;  // boundary values vanish
  RecursionEngine engine(field, p, r, opts);
  for (int k = 1; k <= k_max; ++k) {
    out.b[k - 1] = engine.b_at_r(k);
    out.a[k - 1] = engine.a_at_r(k);
  }
  return out;
}

ReconstructionReport reconstruct_point(const KernelBank& bank,
                                       const MeanField& field, double x,
                                       double y, const SeriesConfig& cfg,
                                       const Phantom* truth) {
  const auto t0 = Clock::now();
  if (cfg.n_max > bank.n_max())
    throw std::out_of_range("reconstruct_point: kernel bank too shallow");
  ReconstructionReport report;
  if (truth) report.true_value = truth->value(x, y);
  if (y <= 0.0) {
    report.on_boundary = true;
    report.f_by_order.assign(cfg.n_max + 1, 0.0);
    report.seconds = elapsed(t0);
    return report;
  }
  require_p_derivatives(field, 2 * cfg.n_max);

  const int nq = cfg.radial_nodes;
  const GaussLegendre& gl = gauss_legendre_unit(nq);

  // d_x^{2i} Mf((x,0), y t_q), shared by every order n
  std::vector<std::vector<double>> derivs(cfg.n_max + 1,
                                          std::vector<double>(nq));
  for (int i = 0; i <= cfg.n_max; ++i)
    for (int q = 0; q < nq; ++q)
      derivs[i][q] = field.deriv_p(x, y * gl.nodes[q], 2 * i);

  const double mf = field.value(x, y);
  report.mean_at_top = mf;

  std::vector<double> y_pow(cfg.n_max + 1);
  y_pow[0] = 1.0;
  for (int i = 1; i <= cfg.n_max; ++i) y_pow[i] = y_pow[i - 1] * y * y;

  report.f_by_order.resize(cfg.n_max + 1);
  for (int n = 0; n <= cfg.n_max; ++n) {
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const OddPolynomial& zni = bank.z(n, i);
      if (zni.empty()) continue;
      double integral = 0.0;
      for (int q = 0; q < nq; ++q)
        integral += gl.weights[q] * zni(gl.nodes[q]) * derivs[i][q];
      sum += y_pow[i] * integral;
    }
    report.f_by_order[n] = 2.0 * (2 * n + 1) * mf + 2.0 * sum;
  }
  report.seconds = elapsed(t0);
  return report;
}

ReconstructionReport reconstruct_point(const CoeffTables& tables,
                                       const MeanField& field, double x,
                                       double y, const SeriesConfig& cfg,
                                       const Phantom* truth) {
  KernelBank bank(tables, cfg.n_max);
  return reconstruct_point(bank, field, x, y, cfg, truth);
}

FlagDerivatives flag_derivatives(const Phantom& f, double p, double r,
                                 double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double x = p - r * s, y = r * c;
  const double fx = f.deriv(x, y, 1, 0);
  const double fy = f.deriv(x, y, 0, 1);
  return FlagDerivatives{fx, -s * fx + c * fy, -r * c * fx - r * s * fy};
}

double consistency_residual(const Phantom& f, double p, double r, double phi) {
  const FlagDerivatives d = flag_derivatives(f, p, r, phi);
  return d.f_p * r + d.f_r * r * std::sin(phi) + d.f_phi * std::cos(phi);
}

double consistency_residual_variant(const Phantom& f, double p, double r,
                                    double phi) {
  const FlagDerivatives d = flag_derivatives(f, p, r, phi);
  return d.f_p * r + d.f_r * r * std::sin(phi) +
         d.f_phi * (std::cos(phi) - r);
}

double locality_probe(const CoeffTables& tables, const MeanField& field_a,
                      const MeanField& field_b, double x, double y,
                      const SeriesConfig& cfg) {
  KernelBank bank(tables, cfg.n_max);
  const auto ra = reconstruct_point(bank, field_a, x, y, cfg);
  const auto rb = reconstruct_point(bank, field_b, x, y, cfg);
  return std::abs(ra.f_by_order.back() - rb.f_by_order.back());
}

GridResult reconstruct_grid(const CoeffTables& tables, const MeanField& field,
                            const GridSpec& grid, const SeriesConfig& cfg,
                            const Phantom* truth, unsigned threads) {
  const auto t0 = Clock::now();
  if (grid.nx < 1 || grid.ny < 1)
    throw std::invalid_argument("reconstruct_grid: empty grid");
  KernelBank bank(tables, cfg.n_max);

  GridResult result;
  result.grid = grid;
  const size_t total = static_cast<size_t>(grid.nx) * grid.ny;
  result.values.assign(total, 0.0);
  if (truth) result.truth.assign(total, 0.0);

  const double dx = grid.nx > 1 ? (grid.x1 - grid.x0) / (grid.nx - 1) : 0.0;
  const double dy = grid.ny > 1 ? (grid.y1 - grid.y0) / (grid.ny - 1) : 0.0;

  auto work = [&](size_t begin, size_t end) {
    for (size_t idx = begin; idx < end; ++idx) {
      const int ix = static_cast<int>(idx) / grid.ny;
      const int iy = static_cast<int>(idx) % grid.ny;
      const double x = grid.x0 + ix * dx;
      const double y = grid.y0 + iy * dy;
      const auto rep = reconstruct_point(bank, field, x, y, cfg);
      result.values[idx] = rep.f_by_order.back();
      if (truth) result.truth[idx] = truth->value(x, y);
    }
  };

  unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, total));
  if (n_threads == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (total + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const size_t begin = t * chunk;
      const size_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  result.seconds = elapsed(t0);
  return result;
}

}  // namespace cmrt
