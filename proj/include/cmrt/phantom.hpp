#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cmrt {

struct UnsupportedDerivative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BumpKind {
  Gaussian,       // amplitude * exp(-((x-x0)^2+(y-y0)^2) / (2 sigma^2))
  PolyBump,       // amplitude * (1 - s^2/rho^2)^m inside s <= rho, else 0
  DiskIndicator,  // amplitude inside s <= rho, else 0 (no derivatives)
};

struct Bump {
  BumpKind kind = BumpKind::Gaussian;
  double x0 = 0.0;
  double y0 = 1.0;
  double scale = 0.1;  // sigma for Gaussian, radius rho otherwise
  double amplitude = 1.0;
  int smoothness = 10;  // exponent m, PolyBump only (m >= 4)
};

/// Practical cap on the derivative order served for Gaussian components.
inline constexpr int kGaussianMaxDerivative = 64;

/// Sum of bumps supported (numerically) in the open upper half-plane:
/// Gaussians need y0 >= 8 sigma, the compactly supported kinds need y0 > rho.
/// Construction validates this. With odd_mirror set, every component is
/// paired with a sign-flipped copy reflected below the x-axis, making the
/// phantom odd in y; that mode deliberately breaks the half-plane hypothesis
/// and exists for annihilation checks only.
///
/// Immutable; evaluation and differentiation are pure and thread-safe.
class Phantom {
 public:
  Phantom() = default;
  explicit Phantom(std::vector<Bump> bumps, bool odd_mirror = false);

  double value(double x, double y) const { return deriv(x, y, 0, 0); }
  /// d-th x-derivative; throws UnsupportedDerivative past max_derivative().
  double deriv_x(double x, double y, int d) const { return deriv(x, y, d, 0); }
  /// Mixed derivative d^(dx+dy) f / dx^dx dy^dy, closed form per component.
  double deriv(double x, double y, int dx, int dy) const;

  /// Largest total derivative order every component supports.
  int max_derivative() const { return max_derivative_; }
  bool odd_mirrored() const { return odd_mirror_; }
  bool empty() const { return bumps_.empty(); }
  /// Sum of |amplitude|; the natural scale for error tolerances.
  double peak() const { return peak_; }
  const std::vector<Bump>& components() const { return bumps_; }

 private:
  std::vector<Bump> bumps_;
  // Per PolyBump component: coefficients of the bivariate even-power
  // expansion, c[l][n] multiplying (x-x0)^(2l) (y-y0)^(2n), l+n <= m.
  std::vector<std::vector<std::vector<double>>> poly_coeffs_;
  bool odd_mirror_ = false;
  int max_derivative_ = kGaussianMaxDerivative;
  double peak_ = 0.0;
};

/// Reads a phantom from its JSON description:
///   {"components": [{"kind": "gaussian", "center": [x, y],
///                    "sigma": s, "amplitude": a}, ...],
///    "odd_mirror": false}
/// PolyBump/disk components use "radius" (and PolyBump "smoothness").
/// Throws std::invalid_argument on malformed input.
Phantom phantom_from_json_text(const std::string& text);
Phantom load_phantom(const std::string& path);

}  // namespace cmrt
