#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmrt/rational.hpp"

namespace cmrt {

/// Coefficient vector of an odd-power polynomial: coeffs[m-1] multiplies
/// t^(2m-1).
using RationalCoeffs = std::vector<Rational>;

struct MissingEntryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One known conflict between the generated tables and the reference
/// coefficient listing. `computed` is what the recurrence (confirmed by an
/// independent exact integration) produces; `printed` is the reference value.
struct Discrepancy {
  std::string entry;       // e.g. "B/5/3"
  int coefficient_index;   // 1-based index m into the coefficient vector
  Rational computed;
  Rational printed;
  std::string note;
};

/// Exact coefficient families
///   A(2k, 2i)     for k >= 1, 0 <= i <= k, with k+i coefficients,
///   B(2k-1, 2i-1) for k >= 1, 1 <= i <= k, with k+i-1 coefficients,
/// generated order by order from the k = 1 seed. All values are exact
/// rationals; a fully built table is immutable and safe to share across
/// threads.
class CoeffTables {
 public:
  bool has_a(int k, int i) const { return a_.count({k, i}) != 0; }
  bool has_b(int k, int i) const { return b_.count({k, i}) != 0; }

  const RationalCoeffs& a(int k, int i) const;
  const RationalCoeffs& b(int k, int i) const;

  /// Zero-extended accessors: out-of-range (k, i, m) reads give 0, which is
  /// exactly the convention the recurrence sums rely on (A(0,0) == 0, and
  /// coefficient indices past a polynomial's degree vanish).
  Rational a_coeff(int k, int i, int m) const;
  Rational b_coeff(int k, int i, int m) const;

  int max_a_order() const { return max_a_order_; }
  int max_b_order() const { return max_b_order_; }
  /// Largest k with both A(2k, .) and B(2k-1, .) fully populated.
  int max_order() const { return std::min(max_a_order_, max_b_order_); }

  bool operator==(const CoeffTables& other) const {
    return a_ == other.a_ && b_ == other.b_;
  }

 private:
  using Key = std::pair<int, int>;  // (k, i)
  std::map<Key, RationalCoeffs> a_;
  std::map<Key, RationalCoeffs> b_;
  int max_a_order_ = 0;
  int max_b_order_ = 0;

  friend CoeffTables base_tables();
  friend void step_b(CoeffTables& tables, int k);
  friend void step_a(CoeffTables& tables, int k);
};

/// Seed tables for k = 1: B(1,1) = [-2], A(2,0) = [-4], A(2,2) = [-2, 2].
CoeffTables base_tables();

/// Adds B(2k+1, 2i-1) for i = 1..k+1. Requires A and B populated through
/// order k; throws MissingEntryError otherwise.
void step_b(CoeffTables& tables, int k);

/// Adds A(2(k+1), 2i) for i = 0..k+1. Requires A through order k and B
/// through order k+1; throws MissingEntryError otherwise.
void step_a(CoeffTables& tables, int k);

/// base_tables() followed by alternating step_b / step_a up to n_max.
CoeffTables build_tables(int n_max);

/// Coefficients z_j(2n, 2i) = sum_{k = max(i, j-i, 1)}^{n} A_j(2k, 2i) for
/// j = 1..n+i. For n = i = 0 returns the empty (zero) polynomial. Throws
/// std::out_of_range when i > n, i < 0, or the tables are too shallow.
RationalCoeffs z_coefficients(const CoeffTables& tables, int n, int i);

/// Conflicts between the generated tables and the reference listing that
/// fall inside the populated range.
std::vector<Discrepancy> known_discrepancies(const CoeffTables& tables);

/// JSON document with exact coefficient strings, e.g.
///   {"max_order": 3, "entries": {"A/2/0": ["-4"], ...},
///    "known_discrepancies": [...]}
std::string tables_to_json(const CoeffTables& tables);

}  // namespace cmrt
