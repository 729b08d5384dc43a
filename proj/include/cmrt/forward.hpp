#pragma once

#include <utility>

#include "cmrt/phantom.hpp"

namespace cmrt {

/// Circle chart used throughout: the point of S((p,0), r) at flag angle
/// phi in [-pi, pi) is
///     (x, y) = (p - r sin(phi), r cos(phi)),
/// phi measured from the upward normal of the center line. The mean and the
/// even (cosine) coefficients do not depend on the orientation choice; the
/// odd (sine) coefficients do, and this orientation is the one under which
/// the series recursions in the inversion module hold.

inline constexpr int kDefaultCircleNodes = 512;

/// Mf(p, r): mean of the phantom over the circle, periodic trapezoid with
/// n_nodes points. r = 0 degenerates to the point value f(p, 0).
/// Requires r >= 0 and n_nodes >= 16.
double forward_mean(const Phantom& f, double p, double r,
                    int n_nodes = kDefaultCircleNodes);

/// d-th derivative of Mf in p: the mean of the x-differentiated phantom
/// (translation in p moves the whole circle).
double forward_mean_deriv(const Phantom& f, double p, double r, int d,
                          int n_nodes = kDefaultCircleNodes);

/// Radial derivative of the d-th p-derivative: mean of grad(f^(d)) . omega
/// (differentiation under the integral sign). Exactly 0 at r = 0.
double forward_mean_radial(const Phantom& f, double p, double r, int d,
                           int n_nodes = kDefaultCircleNodes);

/// k-th Fourier pair of the circle restriction,
///   a_k = (1/pi) integral f(...) cos(k phi) dphi,  b_k likewise with sin.
/// Requires k >= 1.
std::pair<double, double> restriction_fourier(
    const Phantom& f, double p, double r, int k,
    int n_nodes = kDefaultCircleNodes);

}  // namespace cmrt
