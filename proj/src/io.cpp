#include "cmrt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cmrt {

ErrorSummary compute_error(std::span<const double> values,
                           std::span<const double> reference) {
  if (values.size() != reference.size())
    throw std::invalid_argument("compute_error: shape mismatch (" +
                                std::to_string(values.size()) + " vs " +
                                std::to_string(reference.size()) + ")");
  ErrorSummary s;
  if (values.empty()) return s;
  double sq = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    const double d = std::abs(values[i] - reference[i]);
    s.linf = std::max(s.linf, d);
    sq += d * d;
  }
  s.l2 = std::sqrt(sq / values.size());
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(std::ostream& os, const GridResult& grid) {
  os << "x,y,f_n,f_true,abs_err\n";
  const auto& g = grid.grid;
  const double dx = g.nx > 1 ? (g.x1 - g.x0) / (g.nx - 1) : 0.0;
  const double dy = g.ny > 1 ? (g.y1 - g.y0) / (g.ny - 1) : 0.0;
  const bool has_truth = !grid.truth.empty();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int ix = 0; ix < g.nx; ++ix)
    for (int iy = 0; iy < g.ny; ++iy) {
      const size_t idx = static_cast<size_t>(ix) * g.ny + iy;
      const double v = grid.values[idx];
      const double t = has_truth ? grid.truth[idx] : nan;
      os << format_double(g.x0 + ix * dx) << ',' << format_double(g.y0 + iy * dy)
         << ',' << format_double(v) << ',' << format_double(t) << ','
         << format_double(has_truth ? std::abs(v - t) : nan) << '\n';
    }
}

void write_pgm(std::ostream& os, const std::vector<double>& values, int nx,
               int ny) {
  if (static_cast<size_t>(nx) * ny != values.size())
    throw std::invalid_argument("write_pgm: shape mismatch");
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double mn = *mn_it, mx = *mx_it;
  const double span = (mx > mn) ? (mx - mn) : 1.0;
  os << "P2\n" << nx << ' ' << ny << "\n255\n";
  for (int iy = ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double v = values[static_cast<size_t>(ix) * ny + iy];
      const int level =
          static_cast<int>(std::lround(255.0 * (v - mn) / span));
      os << std::clamp(level, 0, 255);
      os << (ix + 1 == nx ? '\n' : ' ');
    }
  }
}

}  // namespace cmrt
