#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmrt/inversion.hpp"

namespace cmrt {

struct ErrorSummary {
  double l2 = 0.0;    // root-mean-square difference
  double linf = 0.0;  // max absolute difference
  std::vector<std::pair<int, double>> per_order_linf;  // n -> linf
};

/// RMS and max-abs differences; throws std::invalid_argument on shape
/// mismatch.
ErrorSummary compute_error(std::span<const double> values,
                           std::span<const double> reference);

/// Doubles are serialized with 17 significant digits so CSV/JSON round-trips
/// are lossless.
std::string format_double(double v);

/// CSV "x,y,f_n,f_true,abs_err" (nan columns when the truth is unknown),
/// LF line endings, x-major row order.
void write_grid_csv(std::ostream& os, const GridResult& grid);

/// Plain-text PGM (P2), min-max scaled to 0..255, top row = largest y.
void write_pgm(std::ostream& os, const std::vector<double>& values, int nx,
               int ny);

}  // namespace cmrt
