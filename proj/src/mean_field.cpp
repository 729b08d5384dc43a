#include "cmrt/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cmrt {
namespace {

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Cubic Lagrange weights for target t relative to window start, nodes at
// 0, 1, 2, 3.
void lagrange4(double t, double w[4]) {
  w[0] = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  w[1] = t * (t - 2) * (t - 3) / 2.0;
  w[2] = -t * (t - 1) * (t - 3) / 2.0;
  w[3] = t * (t - 1) * (t - 2) / 6.0;
}

}  // namespace

std::vector<double> central_difference_stencil(int d) {
  if (d < 0) throw std::invalid_argument("negative derivative order");
  std::vector<double> s{1.0};
  const std::vector<double> second{1.0, -2.0, 1.0};
  const std::vector<double> first{-0.5, 0.0, 0.5};
  for (int q = 0; q < d / 2; ++q) s = convolve(s, second);
  if (d % 2) s = convolve(s, first);
  return s;
}

SampledMeanField::SampledMeanField(std::vector<double> values, int np, int nr,
                                   double p0, double dp, double r0, double dr,
                                   int max_fd_order)
    : values_(std::move(values)),
      np_(np),
      nr_(nr),
      p0_(p0),
      dp_(dp),
      r0_(r0),
      dr_(dr),
      max_fd_order_(max_fd_order) {
  if (np_ < 4 || nr_ < 4)
    throw std::invalid_argument("sampled field needs at least a 4x4 grid");
  if (static_cast<size_t>(np_) * nr_ != values_.size())
    throw std::invalid_argument("sampled field: value count != np * nr");
  if (!(dp_ > 0.0) || !(dr_ > 0.0))
    throw std::invalid_argument("sampled field: spacings must be positive");
}

double SampledMeanField::interp(double p, double r) const {
  const double sp = (p - p0_) / dp_;
  const double sr = (r - r0_) / dr_;
  const int ip = std::clamp(static_cast<int>(std::floor(sp)) - 1, 0, np_ - 4);
  const int ir = std::clamp(static_cast<int>(std::floor(sr)) - 1, 0, nr_ - 4);
  double wp[4], wr[4];
  lagrange4(sp - ip, wp);
  lagrange4(sr - ir, wr);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += wr[b] * at(ip + a, ir + b);
    acc += wp[a] * row;
  }
  return acc;
}

double SampledMeanField::value(double p, double r) const { return interp(p, r); }

double SampledMeanField::deriv_p(double p, double r, int order) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  if (order == 0) return interp(p, r);
  if (order > max_fd_order_)
    throw UnsupportedDerivative("finite-difference order " +
                                std::to_string(order) + " exceeds cap " +
                                std::to_string(max_fd_order_));
  const auto stencil = central_difference_stencil(order);
  const int hw = static_cast<int>(stencil.size()) / 2;
  double acc = 0.0;
  for (int m = -hw; m <= hw; ++m) {
    const double w = stencil[m + hw];
    if (w != 0.0) acc += w * interp(p + m * dp_, r);
  }
  return acc / std::pow(dp_, order);
}

double SampledMeanField::deriv_r(double p, double r, int p_order) const {
  return (deriv_p(p, r + dr_, p_order) - deriv_p(p, r - dr_, p_order)) /
         (2.0 * dr_);
}

int SampledMeanField::read_halfwidth_cells(int order) const {
  const int stencil_hw =
      static_cast<int>(central_difference_stencil(order).size()) / 2;
  return stencil_hw + 2;  // plus the cubic interpolation window
}

SampledMeanField SampledMeanField::smoothed(double sigma_cells) const {
  if (!(sigma_cells > 0.0)) return *this;
  const int hw = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
  std::vector<double> kernel(2 * hw + 1);
  double sum = 0.0;
  for (int m = -hw; m <= hw; ++m) {
    kernel[m + hw] = std::exp(-0.5 * (m / sigma_cells) * (m / sigma_cells));
    sum += kernel[m + hw];
  }
  for (double& k : kernel) k /= sum;

  auto blur_pass = [&](const std::vector<double>& in, bool along_p) {
    std::vector<double> out(in.size());
    for (int ip = 0; ip < np_; ++ip)
      for (int ir = 0; ir < nr_; ++ir) {
        double acc = 0.0;
        for (int m = -hw; m <= hw; ++m) {
          int jp = ip, jr = ir;
          if (along_p)
            jp = std::clamp(ip + m, 0, np_ - 1);
          else
            jr = std::clamp(ir + m, 0, nr_ - 1);
          acc += kernel[m + hw] * in[jp * nr_ + jr];
        }
        out[ip * nr_ + ir] = acc;
      }
    return out;
  };

  std::vector<double> v = blur_pass(values_, true);
  v = blur_pass(v, false);
  return SampledMeanField(std::move(v), np_, nr_, p0_, dp_, r0_, dr_,
                          max_fd_order_);
}

void SampledMeanField::write_csv(std::ostream& os) const {
  os << "p,r,mf\n";
  char buf[96];
  for (int ip = 0; ip < np_; ++ip)
    for (int ir = 0; ir < nr_; ++ir) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p0_ + ip * dp_,
                    r0_ + ir * dr_, at(ip, ir));
      os << buf;
    }
}

SampledMeanField SampledMeanField::read_csv(std::istream& is,
                                            int max_fd_order) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("p,r,mf", 0) != 0)
    throw std::invalid_argument("sinogram CSV must start with header p,r,mf");
  std::vector<double> ps, rs, vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double p, r, v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p, &r, &v) != 3)
      throw std::invalid_argument("bad sinogram CSV row: " + line);
    ps.push_back(p);
    rs.push_back(r);
    vals.push_back(v);
  }
  if (vals.empty()) throw std::invalid_argument("empty sinogram CSV");

  // Rows are written p-major; recover the grid shape from the leading run
  // of constant p.
  size_t nr = 1;
  while (nr < ps.size() && ps[nr] == ps[0]) ++nr;
  if (ps.size() % nr != 0)
    throw std::invalid_argument("sinogram CSV is not a full grid");
  const size_t np = ps.size() / nr;
  if (np < 4 || nr < 4)
    throw std::invalid_argument("sinogram grid must be at least 4x4");
  const double r0 = rs[0], dr = rs[1] - rs[0];
  const double p0 = ps[0], dp = ps[nr] - ps[0];
  for (size_t ip = 0; ip < np; ++ip)
    for (size_t ir = 0; ir < nr; ++ir) {
      const size_t idx = ip * nr + ir;
      if (std::abs(ps[idx] - (p0 + ip * dp)) > 1e-9 * std::max(1.0, std::abs(dp) * np) ||
          std::abs(rs[idx] - (r0 + ir * dr)) > 1e-9 * std::max(1.0, std::abs(dr) * nr))
        throw std::invalid_argument("sinogram CSV grid is not uniform");
    }
  return SampledMeanField(std::move(vals), static_cast<int>(np),
                          static_cast<int>(nr), p0, dp, r0, dr, max_fd_order);
}

SampledMeanField sample_forward(const Phantom& f, double p0, double p1, int np,
                                double r0, double r1, int nr, int circle_nodes,
                                int max_fd_order) {
  if (np < 2 || nr < 2)
    throw std::invalid_argument("sample_forward: resolutions must be >= 2");
  const double dp = (p1 - p0) / (np - 1);
  const double dr = (r1 - r0) / (nr - 1);
  std::vector<double> vals(static_cast<size_t>(np) * nr);
  for (int ip = 0; ip < np; ++ip)
    for (int ir = 0; ir < nr; ++ir)
      vals[ip * nr + ir] =
          forward_mean(f, p0 + ip * dp, r0 + ir * dr, circle_nodes);
  return SampledMeanField(std::move(vals), np, nr, p0, dp, r0, dr,
                          max_fd_order);
}

}  // namespace cmrt
