#include "cmrt/phantom.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace cmrt {
namespace {

// d-th derivative of exp(-s^2 / (2 sigma^2)) via the Hermite three-term
// recurrence, numerically stable for the orders used here.
double gauss_deriv_1d(double s, double sigma, int d) {
  const double isr = 1.0 / (sigma * std::sqrt(2.0));
  const double x = s * isr;
  const double e = std::exp(-x * x);
  if (d == 0) return e;
  double h0 = 1.0, h1 = 2.0 * x;
  for (int n = 1; n < d; ++n) {
    const double h2 = 2.0 * x * h1 - 2.0 * n * h0;
    h0 = h1;
    h1 = h2;
  }
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(isr, d) * h1 * e;
}

double falling_factorial(int p, int a) {
  double f = 1.0;
  for (int q = 0; q < a; ++q) f *= p - q;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int q = 1; q <= k; ++q) b = b * (n - k + q) / q;
  return b;
}

}  // namespace

Phantom::Phantom(std::vector<Bump> bumps, bool odd_mirror)
    : bumps_(std::move(bumps)), odd_mirror_(odd_mirror) {
  for (const Bump& b : bumps_) {
    if (!(b.scale > 0.0))
      throw std::invalid_argument("phantom component needs a positive scale");
    if (!std::isfinite(b.amplitude) || !std::isfinite(b.x0) ||
        !std::isfinite(b.y0))
      throw std::invalid_argument("phantom component has non-finite fields");
    switch (b.kind) {
      case BumpKind::Gaussian:
        if (b.y0 < 8.0 * b.scale)
          throw std::invalid_argument(
              "gaussian component too close to the line: need y0 >= 8 sigma");
        break;
      case BumpKind::PolyBump:
        if (b.smoothness < 4)
          throw std::invalid_argument("poly_bump smoothness must be >= 4");
        [[fallthrough]];
      case BumpKind::DiskIndicator:
        if (b.y0 <= b.scale)
          throw std::invalid_argument(
              "compact component crosses the line: need y0 > radius");
        break;
    }
    peak_ += std::abs(b.amplitude);
    int d_max = kGaussianMaxDerivative;
    if (b.kind == BumpKind::PolyBump) d_max = b.smoothness - 2;
    if (b.kind == BumpKind::DiskIndicator) d_max = 0;
    max_derivative_ = std::min(max_derivative_, d_max);
  }

  // Expand (1 - (dx^2 + dy^2)/rho^2)^m once per PolyBump component.
  poly_coeffs_.resize(bumps_.size());
  for (size_t c = 0; c < bumps_.size(); ++c) {
    const Bump& b = bumps_[c];
    if (b.kind != BumpKind::PolyBump) continue;
    const int m = b.smoothness;
    auto& table = poly_coeffs_[c];
    table.assign(m + 1, std::vector<double>(m + 1, 0.0));
    const double ir2 = 1.0 / (b.scale * b.scale);
    for (int j = 0; j <= m; ++j) {
      const double cj =
          binomial(m, j) * ((j % 2) ? -1.0 : 1.0) * std::pow(ir2, j);
      for (int l = 0; l <= j; ++l) table[l][j - l] += cj * binomial(j, l);
    }
  }
}

double Phantom::deriv(double x, double y, int dx, int dy) const {
  if (dx < 0 || dy < 0) throw std::invalid_argument("negative derivative order");
  if (dx + dy > max_derivative_)
    throw UnsupportedDerivative(
        "derivative order " + std::to_string(dx + dy) +
        " exceeds the phantom's maximum " + std::to_string(max_derivative_));

  auto bump_deriv = [&](size_t c, double px, double py) -> double {
    const Bump& b = bumps_[c];
    const double ux = px - b.x0, uy = py - b.y0;
    switch (b.kind) {
      case BumpKind::Gaussian:
        return b.amplitude * gauss_deriv_1d(ux, b.scale, dx) *
               gauss_deriv_1d(uy, b.scale, dy);
      case BumpKind::DiskIndicator:
        return (ux * ux + uy * uy <= b.scale * b.scale) ? b.amplitude : 0.0;
      case BumpKind::PolyBump: {
        const double rho2 = b.scale * b.scale;
        if (ux * ux + uy * uy >= rho2) return 0.0;
        const int m = b.smoothness;
        const auto& table = poly_coeffs_[c];
        // powers of ux, uy up to 2m
        double acc = 0.0;
        for (int l = 0; l <= m; ++l) {
          if (2 * l < dx) continue;
          const double fx = falling_factorial(2 * l, dx) *
                            std::pow(ux, 2 * l - dx);
          if (fx == 0.0) continue;
          double inner = 0.0;
          for (int n = 0; n + l <= m; ++n) {
            if (2 * n < dy) continue;
            inner += table[l][n] * falling_factorial(2 * n, dy) *
                     std::pow(uy, 2 * n - dy);
          }
          acc += fx * inner;
        }
        return b.amplitude * acc;
      }
    }
    return 0.0;
  };

  double total = 0.0;
  for (size_t c = 0; c < bumps_.size(); ++c) {
    total += bump_deriv(c, x, y);
    if (odd_mirror_) {
      // mirrored copy: -f(x, -y); each y-derivative flips the sign once
      const double sign = (dy % 2 == 0) ? -1.0 : 1.0;
      total += sign * bump_deriv(c, x, -y);
    }
  }
  return total;
}

Phantom phantom_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad phantom JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("components") ||
      !doc["components"].is_array())
    throw std::invalid_argument("phantom JSON needs a \"components\" array");

  std::vector<Bump> bumps;
  for (const auto& comp : doc["components"]) {
    Bump b;
    const std::string kind = comp.value("kind", "");
    if (kind == "gaussian") {
      b.kind = BumpKind::Gaussian;
      if (!comp.contains("sigma"))
        throw std::invalid_argument("gaussian component needs \"sigma\"");
      b.scale = comp["sigma"].get<double>();
    } else if (kind == "poly_bump") {
      b.kind = BumpKind::PolyBump;
      if (!comp.contains("radius"))
        throw std::invalid_argument("poly_bump component needs \"radius\"");
      b.scale = comp["radius"].get<double>();
      b.smoothness = comp.value("smoothness", 10);
    } else if (kind == "disk" || kind == "disk_indicator") {
      b.kind = BumpKind::DiskIndicator;
      if (!comp.contains("radius"))
        throw std::invalid_argument("disk component needs \"radius\"");
      b.scale = comp["radius"].get<double>();
    } else {
      throw std::invalid_argument("unknown phantom component kind '" + kind +
                                  "'");
    }
    if (!comp.contains("center") || !comp["center"].is_array() ||
        comp["center"].size() != 2)
      throw std::invalid_argument("component needs \"center\": [x, y]");
    b.x0 = comp["center"][0].get<double>();
    b.y0 = comp["center"][1].get<double>();
    b.amplitude = comp.value("amplitude", 1.0);
    bumps.push_back(b);
  }
  return Phantom(std::move(bumps), doc.value("odd_mirror", false));
}

Phantom load_phantom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phantom file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return phantom_from_json_text(ss.str());
}

}  // namespace cmrt
