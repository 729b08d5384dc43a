#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "cmrt/coeff_tables.hpp"

namespace cmrt {

/// Polynomial with only odd powers, sum_j c_j t^(2j-1) on [0, 1], evaluated
/// as t * Horner(c, t^2). Immutable after construction; evaluation is pure.
/// Kernels built from a CoeffTables entry keep their exact twin so float
/// round-off can be audited against the rational value.
class OddPolynomial {
 public:
  OddPolynomial() = default;
  explicit OddPolynomial(std::vector<double> coeffs)
      : coeffs_(std::move(coeffs)) {}
  static OddPolynomial from_exact(RationalCoeffs exact);

  /// Requires t in [0, 1] up to a 1e-9 slack; throws std::domain_error
  /// otherwise. The empty polynomial evaluates to 0 everywhere.
  double operator()(double t) const;

  std::span<const double> coeffs() const { return coeffs_; }
  /// Exact coefficients when built from a table entry, nullptr otherwise.
  const RationalCoeffs* exact() const { return exact_.get(); }

  bool empty() const { return coeffs_.empty(); }
  /// 2*len - 1; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) * 2 - 1; }

 private:
  std::vector<double> coeffs_;
  std::shared_ptr<const RationalCoeffs> exact_;
};

enum class KernelFamily { A, B, Z };

/// The A(2k,2i), B(2k-1,2i-1) or Z(n,i) kernel as a float polynomial with
/// its exact twin attached. Throws MissingEntryError / std::out_of_range
/// when the tables do not cover the request.
OddPolynomial kernel_for(const CoeffTables& tables, KernelFamily family,
                         int k_or_n, int i);

/// Samples the kernel at n_samples points uniform on [0, 1] as CSV rows
/// "t,value" (with header).
void write_kernel_csv(std::ostream& os, const OddPolynomial& poly,
                      int n_samples);

}  // namespace cmrt
