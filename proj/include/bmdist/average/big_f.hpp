#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/rational.hpp"
#include "bmdist/numeric/sign_vector.hpp"

namespace bmdist {

// F_n(x) = 2^{-n} * sum over v in {-1,1}^n of |<x, v>|, a norm on R^n. The
// antipodal pair v, -v contributes equally, so only canonical v are summed.
inline constexpr int kMaxAverageDimension = 24;

namespace detail {

inline void check_average_dimension(std::size_t n) {
  if (n < 1 || n > static_cast<std::size_t>(kMaxAverageDimension)) {
    throw CapacityError("F_n supports 1 <= n <= 24, got n = " + std::to_string(n));
  }
}

// Sum over canonical v of |<a, v>| by Gray-code walk.
template <class Acc>
Acc canonical_abs_sum(std::span<const Acc> a) {
  const int n = static_cast<int>(a.size());
  Acc s(0);
  for (const auto& x : a) s += x;  // v = (+1, ..., +1)
  Acc total = s < 0 ? Acc(-s) : s;
  const std::uint64_t count = canonical_count(n);
  std::uint32_t bits = 0;
  for (std::uint64_t g = 1; g < count; ++g) {
    const int b = std::countr_zero(g);
    bits ^= 1u << b;
    const Acc& coef = a[n - 1 - b];
    if ((bits >> b) & 1u) {
      s -= coef + coef;
    } else {
      s += coef + coef;
    }
    total += s < 0 ? Acc(-s) : s;
  }
  return total;
}

// x = a / d with a integer.
inline std::pair<std::vector<Integer>, Integer> integerize(std::span<const Rational> x) {
  Integer d(1);
  for (const auto& v : x) d = lcm(d, v.get_den());
  std::vector<Integer> a;
  a.reserve(x.size());
  for (const auto& v : x) a.push_back(v.get_num() * (d / v.get_den()));
  return {std::move(a), d};
}

}  // namespace detail

inline Rational big_f(std::span<const Rational> x) {
  detail::check_average_dimension(x.size());
  auto [a, d] = detail::integerize(x);
  Integer bound(0);
  for (const auto& v : a) bound += ::abs(v);
  Integer sum;
  if (bound < (Integer(1) << 61)) {
    std::vector<std::int64_t> small;
    for (const auto& v : a) small.push_back(v.get_si());
    sum = Integer(static_cast<long>(detail::canonical_abs_sum<std::int64_t>(small)));
  } else {
    sum = detail::canonical_abs_sum<Integer>(a);
  }
  return make_rational(sum, d * Integer(static_cast<unsigned long>(canonical_count(static_cast<int>(x.size())))));
}

inline double big_f(std::span<const double> x) {
  detail::check_average_dimension(x.size());
  return detail::canonical_abs_sum<double>(x) / static_cast<double>(canonical_count(static_cast<int>(x.size())));
}

inline Rational squared_norm(std::span<const Rational> x) {
  Rational s(0);
  for (const auto& v : x) s += v * v;
  return s;
}

inline double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// ||x||_2^2 / F_n(x)^2; the square keeps the value rational.
inline Rational ratio_squared(std::span<const Rational> x) {
  Rational f = big_f(x);
  if (f == 0) throw DomainError("ratio of the zero vector");
  return squared_norm(x) / (f * f);
}

inline double ratio(std::span<const double> x) {
  const double f = big_f(x);
  if (f == 0.0) throw DomainError("ratio of the zero vector");
  return std::sqrt(squared_norm(x)) / f;
}

inline Rational inner(std::span<const Rational> x, const SignVector& v) {
  Rational s(0);
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > 0) {
      s += x[i];
    } else {
      s -= x[i];
    }
  }
  return s;
}

struct OrthFamily {
  std::vector<SignVector> family;  // canonical sign vectors with <x, v> = 0
  std::size_t rank = 0;
};

inline OrthFamily orth_sign_rank(std::span<const Rational> x) {
  const int n = static_cast<int>(x.size());
  check_sign_dimension(n);
  OrthFamily out;
  for (const auto& v : sign_vectors(n))
    if (inner(x, v) == 0) out.family.push_back(v);
  out.rank = rank_of_family(out.family);
  return out;
}

// F_{n+1}(x) = (F_n(y1) + F_n(y2)) / 2 and ||x||^2 = (||y1||^2 + ||y2||^2) / 2
// for y1, y2 obtained by merging the last two coordinates as sum / difference.
struct SplitCheck {
  bool f_identity = false;
  bool norm_identity = false;
  Rational f_x, f_y1, f_y2;
  std::vector<Rational> y1, y2;

  bool holds() const { return f_identity && norm_identity; }
};

inline SplitCheck split_identities_check(std::span<const Rational> x) {
  if (x.size() < 2) throw PreconditionError("split check needs at least two coordinates");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw PreconditionError("split check needs nonnegative coordinates");
    if (i > 0 && x[i - 1] < x[i]) throw PreconditionError("split check needs coordinates sorted descending");
  }
  const std::size_t m = x.size() - 1;
  SplitCheck c;
  c.y1.assign(x.begin(), x.begin() + m);
  c.y2 = c.y1;
  c.y1[m - 1] = x[m - 1] + x[m];
  c.y2[m - 1] = x[m - 1] - x[m];
  c.f_x = big_f(x);
  c.f_y1 = big_f(c.y1);
  c.f_y2 = big_f(c.y2);
  c.f_identity = c.f_x == (c.f_y1 + c.f_y2) / 2;
  c.norm_identity = squared_norm(x) == (squared_norm(c.y1) + squared_norm(c.y2)) / 2;
  return c;
}

// F_n(y) >= F_n(x) - angle(x, y) for unit x, y.
struct LipschitzCheck {
  double f_x = 0, f_y = 0, angle = 0;
  bool holds = false;
};

inline constexpr double kLipschitzTolerance = 1e-12;

inline LipschitzCheck lipschitz_spot_check(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("directions of different dimensions");
  if (std::fabs(std::sqrt(squared_norm(x)) - 1.0) > 1e-12 || std::fabs(std::sqrt(squared_norm(y)) - 1.0) > 1e-12) {
    throw PreconditionError("lipschitz check needs unit vectors");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  LipschitzCheck c;
  c.f_x = big_f(x);
  c.f_y = big_f(y);
  c.angle = std::acos(std::clamp(dot, -1.0, 1.0));
  c.holds = c.f_y >= c.f_x - c.angle - kLipschitzTolerance;
  return c;
}

}  // namespace bmdist
