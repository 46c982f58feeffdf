#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/rational.hpp"

namespace bmdist {

// a + b * sqrt(m) with rational a, b and squarefree m >= 1. Normalized so
// that m == 1 implies b == 0.
class Surd {
 public:
  Surd() = default;
  Surd(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  Surd(long a) : a_(a) {}                  // NOLINT(google-explicit-constructor)
  Surd(Rational a, Rational b, std::uint64_t m) : a_(std::move(a)), b_(std::move(b)), m_(m) { normalize(); }

  // sqrt(r) for rational r >= 0.
  static Surd sqrt_of(const Rational& r) {
    if (r < 0) throw DomainError("square root of a negative rational");
    // sqrt(p/q) = sqrt(p q) / q
    Integer pq = r.get_num() * r.get_den();
    if (!mpz_fits_ulong_p(pq.get_mpz_t())) throw CapacityError("radicand too large");
    std::uint64_t rad = pq.get_ui();
    std::uint64_t square = 1;
    for (std::uint64_t p = 2; p * p <= rad; ++p) {
      while (rad % (p * p) == 0) {
        rad /= p * p;
        square *= p;
      }
    }
    return Surd(Rational(0), make_rational(Integer(static_cast<unsigned long>(square)), r.get_den()), rad);
  }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_coefficient() const { return b_; }
  std::uint64_t radicand() const { return m_; }
  bool is_rational() const { return b_ == 0; }

  double to_double() const {
    return bmdist::to_double(a_) + bmdist::to_double(b_) * std::sqrt(static_cast<double>(m_));
  }

  friend Surd operator+(const Surd& x, const Surd& y) {
    if (x.is_rational()) return Surd(x.a_ + y.a_, y.b_, y.m_);
    if (y.is_rational()) return Surd(x.a_ + y.a_, x.b_, x.m_);
    if (x.m_ != y.m_) throw DomainError("sum of surds with different radicands");
    return Surd(x.a_ + y.a_, x.b_ + y.b_, x.m_);
  }
  Surd operator-() const { return Surd(-a_, -b_, m_); }
  friend Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }

  friend Surd operator*(const Rational& s, const Surd& x) { return Surd(s * x.a_, s * x.b_, x.m_); }

  // "a", "b*sqrt(m)", "a + b*sqrt(m)"; coefficient 1 is omitted.
  std::string to_string() const {
    if (is_rational()) return bmdist::to_string(a_);
    std::string rad = "sqrt(" + std::to_string(m_) + ")";
    Rational mag = ::abs(b_);
    std::string term = mag == 1 ? rad : bmdist::to_string(mag) + "*" + rad;
    if (a_ == 0) return (b_ < 0 ? "-" : "") + term;
    return bmdist::to_string(a_) + (b_ < 0 ? " - " : " + ") + term;
  }

  // Inverse of to_string().
  static Surd parse(std::string_view s) {
    const std::string text(s);
    if (text.find("sqrt(") == std::string::npos) return Surd(parse_rational(s));
    Rational a(0), b(1);
    std::string_view term = s;
    for (std::string_view sep : {" + ", " - "}) {
      if (auto at = s.find(sep); at != std::string_view::npos) {
        a = parse_rational(s.substr(0, at));
        term = s.substr(at + sep.size());
        if (sep == " - ") b = -1;
        break;
      }
    }
    if (!term.empty() && term.front() == '-') {
      b = -b;
      term.remove_prefix(1);
    }
    if (auto star = term.find('*'); star != std::string_view::npos) {
      b *= parse_rational(term.substr(0, star));
      term.remove_prefix(star + 1);
    }
    if (term.size() < 7 || term.substr(0, 5) != "sqrt(" || term.back() != ')') {
      throw ParseError("malformed surd '" + text + "'");
    }
    std::string_view rad = term.substr(5, term.size() - 6);
    if (!is_integer_literal(rad) || rad.front() == '-') throw ParseError("malformed radicand in '" + text + "'");
    return Surd(a, b, std::stoull(std::string(rad)));
  }

  friend bool operator==(const Surd& x, const Surd& y) { return x.a_ == y.a_ && x.b_ == y.b_ && x.m_ == y.m_; }

 private:
  void normalize() {
    if (m_ == 0) {
      b_ = 0;
      m_ = 1;
    }
    if (m_ == 1) {
      a_ += b_;
      b_ = 0;
    }
    if (b_ == 0) m_ = 1;
    // Pull square factors out of m.
    for (std::uint64_t p = 2; p * p <= m_; ++p) {
      while (m_ % (p * p) == 0) {
        m_ /= p * p;
        b_ *= static_cast<unsigned long>(p);
      }
    }
    if (m_ == 1) {
      a_ += b_;
      b_ = 0;
    }
  }

  Rational a_{0};
  Rational b_{0};
  std::uint64_t m_ = 1;
};

// Sign of p + q sqrt(m) with exact arithmetic.
inline int sign_of(const Rational& p, const Rational& q, std::uint64_t m) {
  const int sp = sgn(p), sq = sgn(q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: compare p^2 against q^2 m.
  const Rational lhs = p * p, rhs = q * q * Rational(static_cast<unsigned long>(m));
  if (lhs == rhs) return 0;
  return lhs > rhs ? sp : sq;
}

inline constexpr double kSurdFallbackTolerance = 1e-12;

struct SurdComparison {
  int sign = 0;        // sign of x - y
  bool exact = true;   // false when decided in floating point
};

// Exact when the radicands agree (or either side is rational); otherwise
// decided in floating point, treating |x - y| <= 1e-12 as equal.
inline SurdComparison compare(const Surd& x, const Surd& y) {
  if (x.is_rational() || y.is_rational() || x.radicand() == y.radicand()) {
    const std::uint64_t m = x.is_rational() ? y.radicand() : x.radicand();
    return {sign_of(x.rational_part() - y.rational_part(), x.radical_coefficient() - y.radical_coefficient(), m), true};
  }
  const double d = x.to_double() - y.to_double();
  return {std::fabs(d) <= kSurdFallbackTolerance ? 0 : (d < 0 ? -1 : 1), false};
}

inline bool leq(const Surd& x, const Surd& y) { return compare(x, y).sign <= 0; }

}  // namespace bmdist
