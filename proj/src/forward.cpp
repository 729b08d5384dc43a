#include "cmrt/forward.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cmrt {
namespace {

struct CircleNodes {
  std::vector<double> sin_phi, cos_phi, phi;
};

// Node tables are cached per size; above the cap the quadratures stream the
// nodes with an incremental rotation instead of storing them.
constexpr int kMaxCachedNodes = 1 << 16;

std::shared_ptr<const CircleNodes> circle_nodes(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CircleNodes>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto nodes = std::make_shared<CircleNodes>();
  nodes->sin_phi.resize(n);
  nodes->cos_phi.resize(n);
  nodes->phi.resize(n);
  for (int i = 0; i < n; ++i) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
    nodes->phi[i] = phi;
    nodes->sin_phi[i] = std::sin(phi);
    nodes->cos_phi[i] = std::cos(phi);
  }
  cache[n] = nodes;
  return nodes;
}

void check_quadrature_args(double r, int n_nodes) {
  if (r < 0.0) throw std::invalid_argument("circle radius must be >= 0");
  if (n_nodes < 16)
    throw std::invalid_argument("circle quadrature needs n_nodes >= 16");
}

// Periodic trapezoid of fn(sin phi, cos phi) over phi in [-pi, pi).
template <class Fn>
double circle_mean(int n_nodes, Fn&& fn) {
  double sum = 0.0;
  if (n_nodes <= kMaxCachedNodes) {
    const auto nodes = circle_nodes(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
      sum += fn(nodes->sin_phi[i], nodes->cos_phi[i]);
  } else {
    const double h = 2.0 * std::numbers::pi / n_nodes;
    const double ch = std::cos(h), sh = std::sin(h);
    double s = std::sin(-std::numbers::pi), c = std::cos(-std::numbers::pi);
    for (int i = 0; i < n_nodes; ++i) {
      sum += fn(s, c);
      const double s2 = s * ch + c * sh;
      c = c * ch - s * sh;
      s = s2;
    }
  }
  return sum / n_nodes;
}

}  // namespace

double forward_mean(const Phantom& f, double p, double r, int n_nodes) {
  check_quadrature_args(r, n_nodes);
  if (r == 0.0) return f.value(p, 0.0);
  return circle_mean(n_nodes, [&](double s, double c) {
    return f.value(p - r * s, r * c);
  });
}

double forward_mean_deriv(const Phantom& f, double p, double r, int d,
                          int n_nodes) {
  check_quadrature_args(r, n_nodes);
  if (r == 0.0) return f.deriv_x(p, 0.0, d);
  return circle_mean(n_nodes, [&](double s, double c) {
    return f.deriv_x(p - r * s, r * c, d);
  });
}

double forward_mean_radial(const Phantom& f, double p, double r, int d,
                           int n_nodes) {
  check_quadrature_args(r, n_nodes);
  if (r == 0.0) return 0.0;
  return circle_mean(n_nodes, [&](double s, double c) {
    return -s * f.deriv(p - r * s, r * c, d + 1, 0) +
           c * f.deriv(p - r * s, r * c, d, 1);
  });
}

std::pair<double, double> restriction_fourier(const Phantom& f, double p,
                                              double r, int k, int n_nodes) {
  check_quadrature_args(r, n_nodes);
  if (k < 1) throw std::invalid_argument("harmonic index must be >= 1");
  if (n_nodes > kMaxCachedNodes)
    throw std::invalid_argument("restriction_fourier: node count too large");
  const auto nodes = circle_nodes(n_nodes);
  double ca = 0.0, sb = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    const double v = f.value(p - r * nodes->sin_phi[i], r * nodes->cos_phi[i]);
    ca += v * std::cos(k * nodes->phi[i]);
    sb += v * std::sin(k * nodes->phi[i]);
  }
  const double w = 2.0 / n_nodes;  // (1/pi) * (2 pi / n)
  return {ca * w, sb * w};
}

}  // namespace cmrt
