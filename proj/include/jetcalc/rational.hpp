#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace jetcalc {

/// Exact rational scalar. Always normalized (lowest terms, positive
/// denominator) by the backend; no rounding anywhere.
using Rational = boost::multiprecision::mpq_rational;

inline Rational factorial(int k) {
  if (k < 0) throw std::invalid_argument("factorial of negative argument");
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline std::string rationalToString(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rationalFromString(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos)
      return Rational(boost::multiprecision::mpz_int(s));
    boost::multiprecision::mpz_int num(s.substr(0, slash));
    boost::multiprecision::mpz_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
}

}  // namespace jetcalc
