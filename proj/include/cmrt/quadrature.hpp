#pragma once

#include <vector>

namespace cmrt {

/// Gauss-Legendre rule mapped to [0, 1] (weights sum to 1).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of size n; thread-safe.
const GaussLegendre& gauss_legendre_unit(int n);

}  // namespace cmrt
