#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/gauge/radius.hpp"

namespace bmdist {

// Every quantity in the lower-bound argument r(T) >= alpha * sqrt(n),
// evaluated on a concrete generator. With N = T^{-1} / det(T^{-1})^{1/n}
// (so |det N| = 1) and rows N_j:
//
//   r(T) >= mean_v ||T^{-1} v||_1
//        >= alpha * s * sum_j ||N_j||_2              (s = |det T^{-1}|^{1/n})
//        >= alpha * s * n * (prod_j ||N_j||_2)^{1/n}
//        >= alpha * s * n
//        >= alpha * sqrt(n)                          (|det T| <= n^{n/2})
struct ChainAudit {
  Scalar radius;
  Scalar mean_l1;        // average of ||T^{-1} v||_1 over all cube vertices
  double det_scale = 0;  // |det T^{-1}|^{1/n}
  double row_norm_sum = 0;
  double geo_mean_bound = 0;  // n * (prod ||N_j||_2)^{1/n}
  double final_lower = 0;     // alpha * sqrt(n)
  std::vector<std::pair<std::string, double>> steps;
};

inline constexpr double kChainTolerance = 1e-9;

inline ChainAudit lower_chain_audit(const Matrix& t, double alpha, unsigned workers = 0) {
  detail::check_radius_input(t);
  const int n = static_cast<int>(t.rows());
  ChainAudit audit;

  RealMatrix inv_real;
  if (t.mode() == Mode::exact) {
    RationalMatrix inv = invert(t.exact());
    audit.radius = radius_of_inverse(inv, workers).value;
    auto scaled = detail::scale_to_integers(inv);
    Rational mean = detail::with_integer_accumulator(scaled, [&](const auto& a, auto to_integer) {
      Integer sum = to_integer(detail::sum_l1(a, n, workers));
      return make_rational(sum, scaled.denominator * Integer(static_cast<unsigned long>(canonical_count(n))));
    });
    audit.mean_l1 = Scalar(mean);
    if (audit.radius.rational() < mean) {
      throw AuditFailure("radius below vertex average: " + audit.radius.to_string() + " < " + to_string(mean));
    }
    inv_real = to_real(inv);
  } else {
    inv_real = invert(t.floating());
    audit.radius = radius_of_inverse(inv_real, workers).value;
    const double sum = detail::sum_l1(inv_real.data(), n, workers);
    audit.mean_l1 = Scalar(sum / static_cast<double>(canonical_count(n)));
  }

  const double det_inv = std::fabs(determinant(inv_real));
  audit.det_scale = std::pow(det_inv, 1.0 / n);
  double log_prod = 0.0;
  for (int j = 0; j < n; ++j) {
    double sq = 0.0;
    for (int k = 0; k < n; ++k) sq += inv_real(j, k) * inv_real(j, k);
    const double norm = std::sqrt(sq) / audit.det_scale;
    audit.row_norm_sum += norm;
    log_prod += std::log(norm);
  }
  audit.geo_mean_bound = n * std::exp(log_prod / n);
  audit.final_lower = alpha * std::sqrt(static_cast<double>(n));

  audit.steps = {
      {"radius", audit.radius.to_double()},
      {"vertex average", audit.mean_l1.to_double()},
      {"alpha*s*sum|N_j|", alpha * audit.det_scale * audit.row_norm_sum},
      {"alpha*s*n*geomean|N_j|", alpha * audit.det_scale * audit.geo_mean_bound},
      {"alpha*s*n", alpha * audit.det_scale * n},
      {"alpha*sqrt(n)", audit.final_lower},
  };
  for (std::size_t i = 1; i < audit.steps.size(); ++i) {
    const auto& [prev_name, prev] = audit.steps[i - 1];
    const auto& [name, value] = audit.steps[i];
    if (prev < value - kChainTolerance) {
      throw AuditFailure("chain step violated: " + prev_name + " = " + format_double(prev) + " < " + name + " = " +
                         format_double(value));
    }
  }
  return audit;
}

}  // namespace bmdist
