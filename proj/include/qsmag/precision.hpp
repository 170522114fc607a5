#pragma once

// Scalar types used across the library. Every numerical routine is templated
// on its real type; `double` is the default and `HighPrecision` (quad
// precision, ~33 significant digits) is the opt-in mode for large monomial
// bases.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>

#include <Eigen/Core>

#include <cctype>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

#include "qsmag/error.hpp"

namespace qsmag {

using HighPrecision = boost::multiprecision::float128;
// Expression templates off: values are stored and passed around far more
// than they are combined in long expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

enum class Precision { Double, High };

inline std::string_view to_string(Precision p) {
  return p == Precision::Double ? "double" : "high";
}

template <typename Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <typename Real>
inline Real from_rational(const Rational& q) {
  if constexpr (std::is_same_v<Real, double>) {
    return static_cast<double>(q);
  } else {
    // numerator/denominator can exceed the float range of Real individually,
    // so divide in the rational domain first and round once.
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    const unsigned bits = std::numeric_limits<Real>::digits + 8;
    const auto nb = num == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(num)));
    const auto db = static_cast<unsigned>(boost::multiprecision::msb(den));
    const int shift = static_cast<int>(bits) - static_cast<int>(nb) + static_cast<int>(db);
    BigInt scaled = shift >= 0 ? BigInt(num << shift) / den : BigInt(num / (den << -shift));
    Real r = static_cast<Real>(scaled);
    return ldexp(r, -shift);
  }
}

/// Exact value of "p/q", a decimal such as "-0.25", or "1.5e-3".
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return DomainError("not a rational number: '" + std::string(text) + "'"); };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  BigInt digits = 0;
  int scale = 0;
  bool any = false, point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (point) ++scale;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!any) throw bad();
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    const std::string rest(text.substr(i + 1));
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (...) {
      throw bad();
    }
    if (used != rest.size() || std::abs(exponent) > 4000) throw bad();
    i = text.size();
  }
  if (i != text.size()) throw bad();
  exponent -= scale;
  BigInt pow10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(exponent)));
  Rational value = exponent >= 0 ? Rational(digits * pow10) : Rational(digits, pow10);
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1 ? boost::multiprecision::numerator(q).str() : q.str();
}

}  // namespace qsmag

namespace Eigen {

// Boost 1.74 ships Eigen interop without infinity()/quiet_NaN(), which the
// Eigen 3.4 eigensolvers need.
template <>
struct NumTraits<qsmag::HighPrecision> : GenericNumTraits<qsmag::HighPrecision> {
  using Real = qsmag::HighPrecision;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return Real(1000) * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Real>::digits10; }
};

}  // namespace Eigen
