#pragma once

#include <optional>
#include <vector>

#include "cmrt/coeff_tables.hpp"
#include "cmrt/mean_field.hpp"
#include "cmrt/odd_polynomial.hpp"

namespace cmrt {

struct SeriesConfig {
  int n_max = 10;
  int radial_nodes = 128;  // Gauss-Legendre nodes for integrals over [0, r]
};

struct ReconstructionReport {
  std::vector<double> f_by_order;       // f_n for n = 0..n_max
  double mean_at_top = 0.0;             // Mf((x,0), y)
  bool on_boundary = false;             // y <= 0: values forced to 0
  double seconds = 0.0;
  std::optional<double> true_value;     // ground truth when known

  std::vector<double> abs_errors() const;
};

/// Float kernels derived from a coefficient table, cached for reuse across
/// many evaluation points. Immutable after construction.
class KernelBank {
 public:
  KernelBank(const CoeffTables& tables, int n_max);
  const OddPolynomial& z(int n, int i) const;
  int n_max() const { return n_max_; }

 private:
  int n_max_;
  std::vector<OddPolynomial> z_;  // triangular, (n, i) with i <= n
};

/// Series coefficient a_{2k}(p, r) from the single-integral polynomial form:
///   2 Mf(p,r) + sum_{i=0}^{k} r^{2i} int_0^1 A(2k,2i)(t) d_p^{2i}Mf(p, rt) dt
/// (the substitution t = u/r absorbs the nominal 1/r factor of the i = 0
/// term exactly). Gauss-Legendre with radial_nodes points.
double a_even_lemma(const CoeffTables& tables, const MeanField& field,
                    double p, double r, int k, int radial_nodes = 128);

/// Series coefficient b_{2k-1}(p, r), likewise:
///   sum_{i=1}^{k} r^{2i-1} int_0^1 B(2k-1,2i-1)(t) d_p^{2i-1}Mf(p, rt) dt.
/// r <= 0 returns 0.
double b_odd_lemma(const CoeffTables& tables, const MeanField& field, double p,
                   double r, int k, int radial_nodes = 128);

struct RecursionOptions {
  int collocation_nodes = 128;  // Chebyshev-Lobatto points on [0, r]
  int quad_nodes = 64;          // Gauss-Legendre per nested integral
  int max_depth = 4;            // refuse deeper recursions
};

struct CoefficientSet {
  std::vector<double> a;  // a[k-1] = a_{2k}
  std::vector<double> b;  // b[k-1] = b_{2k-1}
};

/// Evaluates the coefficient recursion literally as nested Volterra
/// integrals: b_1 from its 1/r-weighted integral, then alternately a_{2k}
/// (consuming the radial derivative of Mf and p-derivatives of the lower
/// odd coefficients) and b_{2k+1}. Inner coefficient functions are built on
/// a Chebyshev grid over [0, r] and interpolated inside outer quadratures;
/// p-derivatives of coefficients reuse the same formulas on the
/// p-differentiated field. Analytic fields only.
CoefficientSet coeffs_recursive(const MeanField& field, double p, double r,
                                int k_max, const RecursionOptions& opts = {});

/// Truncated reconstruction at (x, y > 0):
///   f_n = 2(2n+1) Mf((x,0), y)
///         + 2 sum_{i=0}^{n} y^{2i} int_0^1 Z(n,i)(t) d_x^{2i}Mf((x,0), yt) dt
/// for every n <= cfg.n_max, equal to 2 Mf + 2 sum_{k<=n} a_{2k} by exact
/// rearrangement. y <= 0 is flagged and reports zeros (the function
/// vanishes on the line by hypothesis and the series degenerates there).
ReconstructionReport reconstruct_point(const KernelBank& bank,
                                       const MeanField& field, double x,
                                       double y, const SeriesConfig& cfg,
                                       const Phantom* truth = nullptr);
ReconstructionReport reconstruct_point(const CoeffTables& tables,
                                       const MeanField& field, double x,
                                       double y, const SeriesConfig& cfg,
                                       const Phantom* truth = nullptr);

/// Flag-chart derivatives of f(p - r sin(phi), r cos(phi)) at fixed flag.
struct FlagDerivatives {
  double f_p, f_r, f_phi;
};
FlagDerivatives flag_derivatives(const Phantom& f, double p, double r,
                                 double phi);

/// Residual of the flag consistency identity
///   f_p r + f_r r sin(phi) + f_phi cos(phi) = 0,
/// which holds identically for any function of (x, y) alone; the returned
/// value is pure round-off for smooth phantoms.
double consistency_residual(const Phantom& f, double p, double r, double phi);

/// Residual of the variant identity with the angular coefficient
/// (cos(phi) - r) instead of cos(phi); generically nonzero, kept for
/// diagnostics. It differs from the consistent form by -r * f_phi.
double consistency_residual_variant(const Phantom& f, double p, double r,
                                    double phi);

/// |f_n(x, y; field_a) - f_n(x, y; field_b)| at n = cfg.n_max. When the two
/// fields agree on {(p, u): |p - x| <= delta, 0 <= u <= y}, the result is
/// zero up to quadrature round-off: the reconstruction reads nothing else.
double locality_probe(const CoeffTables& tables, const MeanField& field_a,
                      const MeanField& field_b, double x, double y,
                      const SeriesConfig& cfg);

struct GridSpec {
  double x0, x1;
  int nx;
  double y0, y1;
  int ny;
};

struct GridResult {
  GridSpec grid;
  std::vector<double> values;  // [ix * ny + iy], order n_max
  std::vector<double> truth;   // same layout; empty when unknown
  double seconds = 0.0;
};

/// Reconstruction over a grid, parallelized over points (pure per-point
/// work, so the result is bitwise independent of the thread count).
/// threads = 0 picks the hardware concurrency.
GridResult reconstruct_grid(const CoeffTables& tables, const MeanField& field,
                            const GridSpec& grid, const SeriesConfig& cfg,
                            const Phantom* truth = nullptr,
                            unsigned threads = 0);

}  // namespace cmrt
