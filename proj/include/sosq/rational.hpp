#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace sosq {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact binary expansion of a finite double.
inline Rational rational_from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (d == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(d, &exp);  // d = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mant);
  if (exp >= 0) {
    r *= Rational(Integer(1) << exp);
  } else {
    r /= Rational(Integer(1) << (-exp));
  }
  return r;
}

/// Nearest rational with denominator 2^k (ties toward +inf, matching llround on halves).
inline std::optional<Rational> round_to_dyadic(double v, int k) {
  if (!std::isfinite(v) || k < 0) return std::nullopt;
  const double scaled = std::ldexp(v, k);
  if (std::abs(scaled) >= 9.0e18) return std::nullopt;
  Integer num(static_cast<std::int64_t>(std::llround(scaled)));
  return Rational(num, Integer(1) << k);
}

/// Nearest rational with denominator 2^k, exact input.
inline Rational round_to_dyadic(const Rational& v, int k) {
  Integer den = Integer(1) << k;
  Integer num2 = numerator(v) * den * 2;
  Integer d2 = denominator(v) * 2;
  // round(num2 / d2 / ... ) = floor((2*v*den + 1)/2)
  Integer t = num2 + denominator(v);
  Integer q = t / d2;
  if (t < 0 && t % d2 != 0) --q;  // floor division
  return Rational(q, den);
}

inline std::string rational_to_string(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

}  // namespace sosq
