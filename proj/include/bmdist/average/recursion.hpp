#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "bmdist/average/candidates.hpp"
#include "bmdist/errors.hpp"
#include "bmdist/numeric/rational.hpp"

namespace bmdist {

// Growth of rho from dimension n to n+1 obtained by splitting the last
// coordinate: rho_{n+1} <= rho_n * factor(n), with
//   factor(n) = sqrt(2) * sqrt(2 + 4/(n-1)) / (1 + sqrt(1 + 4/(n-1)))
// and the claimed simpler bound factor(n) <= 1 + 1/(2 (n-1)^2).
struct RecursionFactor {
  int n = 0;
  double factor = 0;
  Rational bound;  // 1 + 1/(2 (n-1)^2)
  bool holds = false;
  std::string closed_form;
};

inline constexpr double kRecursionTolerance = 1e-14;

inline RecursionFactor recursion_factor(long n) {
  if (n < 2) throw DomainError("recursion factor needs n >= 2");
  RecursionFactor r;
  r.n = static_cast<int>(n);
  const long double t = 4.0L / static_cast<long double>(n - 1);
  r.factor = static_cast<double>(std::sqrt(2.0L) * std::sqrt(2.0L + t) / (1.0L + std::sqrt(1.0L + t)));
  const Integer m(n - 1);
  r.bound = Rational(1) + make_rational(Integer(1), 2 * m * m);
  r.holds = r.factor <= to_double(r.bound) + kRecursionTolerance;
  const std::string s = std::to_string(n - 1);
  r.closed_form = "sqrt(2)*sqrt(2+4/" + s + ")/(1+sqrt(1+4/" + s + "))";
  return r;
}

// rho_n <= base_rho * prod_{j=base_n}^{base_n+terms-1} (1 + 1/(2 (j-1)^2)) * tail
// for every n, where tail bounds the remaining infinite product:
//   prod_{j>=J} (1 + 1/(2 (j-1)^2)) <= exp(sum_{m>=J-1} 1/(2 m^2)) <= exp(1/(2 (J-2))).
struct ProductBound {
  double truncated = 0;  // base_rho times the finite product
  double tail_factor = 0;
  double certified = 0;  // truncated * tail_factor
  AlphaRecord record;
};

inline ProductBound product_bound(int base_n, double base_rho, std::uint64_t terms) {
  if (base_n < 2) throw DomainError("product bound needs base_n >= 2");
  if (terms < 1) throw DomainError("product bound needs at least one term");
  if (!(base_rho >= 1.0)) throw DomainError("base rho must be >= 1");
  long double log_sum = 0.0L;
  const std::uint64_t first = static_cast<std::uint64_t>(base_n);
  for (std::uint64_t j = first; j < first + terms; ++j) {
    const long double m = static_cast<long double>(j - 1);
    log_sum += std::log1p(1.0L / (2.0L * m * m));
  }
  const long double J = static_cast<long double>(first + terms);
  ProductBound p;
  p.truncated = static_cast<double>(static_cast<long double>(base_rho) * std::exp(log_sum));
  p.tail_factor = static_cast<double>(std::exp(1.0L / (2.0L * (J - 2.0L))));
  // Round the certified value up by a few ulps of accumulated error.
  p.certified = std::nextafter(std::nextafter(p.truncated * p.tail_factor, INFINITY), INFINITY);
  p.record.n = 0;
  p.record.rho = p.certified;
  p.record.alpha = 1.0 / p.certified;
  p.record.provenance = AlphaProvenance::product_upper_bound;
  p.record.base_n = base_n;
  p.record.base_rho = base_rho;
  p.record.terms = terms;
  return p;
}

}  // namespace bmdist
