#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmrt {

/// Exact fraction over arbitrary-precision integers. Kept canonical by the
/// backend: lowest terms, positive denominator, exact add/mul/div.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}

inline BigInt denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// "n" when the value is integral, "n/d" otherwise.
inline std::string to_fraction_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "n" or "n/d"; throws std::invalid_argument on malformed input or
/// zero denominator.
inline Rational rational_from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty fraction string");
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(BigInt(std::string(text)));
    }
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("malformed fraction '" + std::string(text) +
                                "': " + e.what());
  }
}

}  // namespace cmrt
