#pragma once

#include <iosfwd>
#include <vector>

#include "cmrt/forward.hpp"
#include "cmrt/phantom.hpp"

namespace cmrt {

/// Provider of Mf(p, r) and its derivatives. Implementations are immutable
/// and safe to share across threads.
class MeanField {
 public:
  virtual ~MeanField() = default;

  virtual double value(double p, double r) const = 0;
  /// order-th derivative in p.
  virtual double deriv_p(double p, double r, int order) const = 0;
  /// Radial derivative d/dr of the p_order-th p-derivative.
  virtual double deriv_r(double p, double r, int p_order = 0) const = 0;
  virtual int max_p_derivative() const = 0;
  virtual bool is_analytic() const = 0;
};

/// Mf backed by an analytic phantom: p-derivatives are means of the
/// x-differentiated phantom, the radial derivative differentiates under the
/// integral sign. Derivatives are available up to the phantom's own cap.
class AnalyticMeanField final : public MeanField {
 public:
  explicit AnalyticMeanField(Phantom phantom,
                             int circle_nodes = kDefaultCircleNodes)
      : phantom_(std::move(phantom)), nodes_(circle_nodes) {}

  double value(double p, double r) const override {
    return forward_mean(phantom_, p, r, nodes_);
  }
  double deriv_p(double p, double r, int order) const override {
    return forward_mean_deriv(phantom_, p, r, order, nodes_);
  }
  double deriv_r(double p, double r, int p_order = 0) const override {
    return forward_mean_radial(phantom_, p, r, p_order, nodes_);
  }
  int max_p_derivative() const override { return phantom_.max_derivative(); }
  bool is_analytic() const override { return true; }

  const Phantom& phantom() const { return phantom_; }
  int circle_nodes() const { return nodes_; }

 private:
  Phantom phantom_;
  int nodes_;
};

/// Mf sampled on a uniform (p, r) grid. Values are interpolated with
/// separable cubic Lagrange stencils; p-derivatives use centered finite
/// differences of second-order accuracy composed to the requested order.
/// High-order differences amplify data error, so derivative orders beyond
/// max_fd_order are refused rather than silently degraded.
class SampledMeanField final : public MeanField {
 public:
  SampledMeanField(std::vector<double> values, int np, int nr, double p0,
                   double dp, double r0, double dr, int max_fd_order = 4);

  double value(double p, double r) const override;
  double deriv_p(double p, double r, int order) const override;
  double deriv_r(double p, double r, int p_order = 0) const override;
  int max_p_derivative() const override { return max_fd_order_; }
  bool is_analytic() const override { return false; }

  /// Copy with a Gaussian blur (sigma in cell units) applied to the grid.
  SampledMeanField smoothed(double sigma_cells) const;

  /// Cells read on either side of the evaluation point by deriv_p(order):
  /// stencil reach plus the interpolation window.
  int read_halfwidth_cells(int order) const;

  int np() const { return np_; }
  int nr() const { return nr_; }
  double p0() const { return p0_; }
  double dp() const { return dp_; }
  double r0() const { return r0_; }
  double dr() const { return dr_; }
  const std::vector<double>& values() const { return values_; }

  /// CSV with header "p,r,mf", row-major in p then r, full double precision.
  void write_csv(std::ostream& os) const;
  static SampledMeanField read_csv(std::istream& is, int max_fd_order = 4);

 private:
  double at(int ip, int ir) const { return values_[ip * nr_ + ir]; }
  double interp(double p, double r) const;

  std::vector<double> values_;  // [ip * nr + ir]
  int np_, nr_;
  double p0_, dp_, r0_, dr_;
  int max_fd_order_;
};

/// Samples the forward transform of a phantom on a uniform grid.
SampledMeanField sample_forward(const Phantom& f, double p0, double p1, int np,
                                double r0, double r1, int nr,
                                int circle_nodes = kDefaultCircleNodes,
                                int max_fd_order = 4);

/// Centered finite-difference weights for the d-th derivative at unit
/// spacing, accuracy order 2 (offsets run -halfwidth..halfwidth).
std::vector<double> central_difference_stencil(int d);

}  // namespace cmrt
