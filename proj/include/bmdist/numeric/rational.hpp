#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "bmdist/errors.hpp"

namespace bmdist {

using Integer = mpz_class;
using Rational = mpq_class;

// Builds a reduced fraction.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact binary value of a double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  return Rational(x);
}

// Nearest double (mpq's get_d truncates toward zero).
inline double to_double(const Rational& r) {
  const double t = r.get_d();
  if (!std::isfinite(t)) return t;
  const double away = std::nextafter(t, r < 0 ? -HUGE_VAL : HUGE_VAL);
  if (!std::isfinite(away)) return t;
  const Rational dt = ::abs(r - Rational(t)), da = ::abs(Rational(away) - r);
  return da < dt ? away : t;
}

// "p" when the denominator is one, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace detail

// True for "[+-]digits".
inline bool is_integer_literal(std::string_view s) {
  bool neg = false;
  return detail::all_digits(detail::strip_sign(s, neg));
}

// True for "[+-]digits/digits".
inline bool is_fraction_literal(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return false;
  return is_integer_literal(s.substr(0, slash)) && detail::all_digits(s.substr(slash + 1));
}

// Parses "p/q", integers and decimal literals ("-0.25", "1.5e-3") exactly.
inline Rational parse_rational(std::string_view token) {
  if (token.empty()) throw ParseError("empty numeric token");
  if (is_fraction_literal(token)) {
    auto slash = token.find('/');
    if (token.front() == '+') {
      token.remove_prefix(1);
      --slash;
    }
    Integer num(std::string(token.substr(0, slash)), 10);
    Integer den(std::string(token.substr(slash + 1)), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(token) + "'");
    return make_rational(num, den);
  }
  bool negative = false;
  std::string_view body = detail::strip_sign(token, negative);
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = body.substr(e + 1);
    bool exp_neg = false;
    std::string_view exp_digits = detail::strip_sign(exp_part, exp_neg);
    if (!detail::all_digits(exp_digits) || exp_digits.size() > 6) {
      throw ParseError("bad exponent in '" + std::string(token) + "'");
    }
    exponent = std::stol(std::string(exp_digits)) * (exp_neg ? -1 : 1);
    body = body.substr(0, e);
  }
  std::string digits;
  auto dot = body.find('.');
  if (dot != std::string_view::npos) {
    std::string_view int_part = body.substr(0, dot);
    std::string_view frac_part = body.substr(dot + 1);
    if ((!int_part.empty() && !detail::all_digits(int_part)) ||
        (!frac_part.empty() && !detail::all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw ParseError("malformed decimal '" + std::string(token) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!detail::all_digits(body)) throw ParseError("malformed number '" + std::string(token) + "'");
    digits = std::string(body);
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? make_rational(mantissa, scale) : Rational(mantissa * scale);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool fits_int64(const Integer& z) {
  return mpz_fits_slong_p(z.get_mpz_t()) != 0 && sizeof(long) == 8;
}

}  // namespace bmdist
