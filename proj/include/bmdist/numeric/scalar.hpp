#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <string>
#include <variant>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/rational.hpp"

namespace bmdist {

enum class Mode { exact, floating };

inline const char* to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

// Shortest round-trippable decimal: 17 significant digits.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// A number that is either an exact rational or a double. Mixing the two in
// arithmetic throws ModeError.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double d) : value_(d) {}               // NOLINT(google-explicit-constructor)
  Scalar(int i) : value_(Rational(i)) {}        // NOLINT(google-explicit-constructor)

  static Scalar zero(Mode m) { return m == Mode::exact ? Scalar(Rational(0)) : Scalar(0.0); }
  static Scalar one(Mode m) { return m == Mode::exact ? Scalar(Rational(1)) : Scalar(1.0); }

  Mode mode() const { return std::holds_alternative<Rational>(value_) ? Mode::exact : Mode::floating; }
  bool is_exact() const { return mode() == Mode::exact; }

  const Rational& rational() const {
    if (!is_exact()) throw ModeError("scalar is not exact");
    return std::get<Rational>(value_);
  }
  double floating() const {
    if (is_exact()) throw ModeError("scalar is not floating");
    return std::get<double>(value_);
  }
  double to_double() const {
    return is_exact() ? bmdist::to_double(std::get<Rational>(value_)) : std::get<double>(value_);
  }

  std::string to_string() const {
    return is_exact() ? bmdist::to_string(std::get<Rational>(value_)) : format_double(std::get<double>(value_));
  }

  Scalar abs() const {
    if (is_exact()) return Scalar(Rational(::abs(std::get<Rational>(value_))));
    return Scalar(std::fabs(std::get<double>(value_)));
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return binary(a, b, [](auto x, auto y) { return x + y; }); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return binary(a, b, [](auto x, auto y) { return x - y; }); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return binary(a, b, [](auto x, auto y) { return x * y; }); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_exact() ? b.rational() == 0 : b.floating() == 0.0) throw DomainError("division by zero");
    return binary(a, b, [](auto x, auto y) { return x / y; });
  }
  Scalar operator-() const {
    if (is_exact()) return Scalar(Rational(-std::get<Rational>(value_)));
    return Scalar(-std::get<double>(value_));
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    return a.is_exact() ? a.rational() == b.rational() : a.floating() == b.floating();
  }
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    if (a.is_exact()) {
      int c = cmp(a.rational(), b.rational());
      return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
    }
    return a.floating() <=> b.floating();
  }

 private:
  static void check_same(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) throw ModeError("mixed exact/float scalar operation");
  }

  template <class Op>
  static Scalar binary(const Scalar& a, const Scalar& b, Op op) {
    check_same(a, b);
    if (a.is_exact()) return Scalar(Rational(op(a.rational(), b.rational())));
    return Scalar(static_cast<double>(op(a.floating(), b.floating())));
  }

  std::variant<Rational, double> value_;
};

}  // namespace bmdist
