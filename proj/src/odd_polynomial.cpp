#include "cmrt/odd_polynomial.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cmrt {

OddPolynomial OddPolynomial::from_exact(RationalCoeffs exact) {
  OddPolynomial p;
  p.coeffs_.reserve(exact.size());
  for (const Rational& c : exact) p.coeffs_.push_back(to_double(c));
  p.exact_ = std::make_shared<const RationalCoeffs>(std::move(exact));
  return p;
}

double OddPolynomial::operator()(double t) const {
  constexpr double kSlack = 1e-9;
  if (t < -kSlack || t > 1.0 + kSlack)
    throw std::domain_error("OddPolynomial evaluated outside [0,1]: t=" +
                            std::to_string(t));
  if (coeffs_.empty()) return 0.0;
  const double t2 = t * t;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * t2 + *it;
  return acc * t;
}

OddPolynomial kernel_for(const CoeffTables& tables, KernelFamily family,
                         int k_or_n, int i) {
  switch (family) {
    case KernelFamily::A:
      return OddPolynomial::from_exact(tables.a(k_or_n, i));
    case KernelFamily::B:
      return OddPolynomial::from_exact(tables.b(k_or_n, i));
    case KernelFamily::Z:
      return OddPolynomial::from_exact(z_coefficients(tables, k_or_n, i));
  }
  throw std::invalid_argument("kernel_for: bad family");
}

void write_kernel_csv(std::ostream& os, const OddPolynomial& poly,
                      int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("need at least 2 samples");
  os << "t,value\n";
  char buf[64];
  for (int s = 0; s < n_samples; ++s) {
    const double t = static_cast<double>(s) / (n_samples - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, poly(t));
    os << buf;
  }
}

}  // namespace cmrt
