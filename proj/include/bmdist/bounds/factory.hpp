#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmdist/average/candidates.hpp"
#include "bmdist/average/recursion.hpp"
#include "bmdist/bounds/certificate.hpp"
#include "bmdist/gauge/radius.hpp"
#include "bmdist/hadamard/hadamard.hpp"
#include "bmdist/parallel.hpp"
#include "bmdist/reference_matrices.hpp"

namespace bmdist {

// Constructions up to this dimension get their radius measured by enumeration.
inline constexpr int kMeasureLimit = 16;
// Default largest n for which proven_lower runs the exact vertex enumeration.
inline constexpr int kDefaultExactAlphaLimit = 6;

namespace detail {

inline void measure_blocks(BoundCertificate& c, unsigned workers) {
  if (c.n > kMeasureLimit) return;
  std::vector<Matrix> mats;
  for (const auto& b : c.blocks) mats.push_back(b.to_matrix());
  c.measured = radius_block(mats, workers).value;
}

inline BoundValue to_bound_value(const Scalar& s) {
  if (s.is_exact()) return BoundValue::of(Surd(s.rational()));
  return BoundValue::approximate(s.floating());
}

inline Surd analytic_sum(const std::vector<ConstructionBlock>& blocks) {
  Surd total(0L);
  for (const auto& b : blocks) total = total + b.analytic_radius();
  return total;
}

}  // namespace detail

// Binary expansion n = sum 2^{k_i}: the direct sum of Sylvester blocks, each
// contributing at most sqrt(2^{k_i}). Claimed value is that analytic sum and
// is checked against (sqrt(2) + 1) sqrt(n).
inline BoundCertificate block_compose_upper(int n, unsigned workers = 0) {
  if (n < 1) throw DomainError("dimension must be positive");
  BoundCertificate c;
  c.n = n;
  c.direction = Direction::upper;
  c.method = BoundMethod::block_compose;
  for (int k = 30; k >= 0; --k) {
    if ((n >> k) & 1) c.blocks.push_back(ConstructionBlock::hadamard(OrderRecipe{std::uint64_t{1} << k, k, 0}));
  }
  c.claimed = BoundValue::of(detail::analytic_sum(c.blocks));
  c.theorem_bound = (std::sqrt(2.0) + 1.0) * std::sqrt(static_cast<double>(n));
  c.theorem_holds = c.claimed.value <= c.theorem_bound + kSurdFallbackTolerance;
  detail::measure_blocks(c, workers);
  return c;
}

// I_j (+) H_m with m the largest constructible Hadamard order <= n and
// j = n - m; claimed sqrt(m) + j.
inline BoundCertificate hadamard_pad_upper(int n, unsigned workers = 0) {
  if (n < 1) throw DomainError("dimension must be positive");
  const OrderRecipe best = best_available_order(static_cast<std::uint64_t>(n));
  const auto gap = static_cast<std::uint64_t>(n) - best.order;
  BoundCertificate c;
  c.n = n;
  c.direction = Direction::upper;
  c.method = BoundMethod::hadamard_pad;
  if (gap > 0) c.blocks.push_back(ConstructionBlock::identity(gap));
  c.blocks.push_back(ConstructionBlock::hadamard(best));
  c.claimed = BoundValue::of(detail::analytic_sum(c.blocks));
  if (gap <= 3) {
    const Surd conjectured = Surd::sqrt_of(Rational(n)) + Surd(3L);
    c.within_sqrt_n_plus_3 = leq(*c.claimed.exact, conjectured);
  }
  detail::measure_blocks(c, workers);
  return c;
}

// Upper bound from an explicit generator: its radius.
inline BoundCertificate direct_matrix_upper(const std::string& name, const Matrix& t, unsigned workers = 0) {
  BoundCertificate c;
  c.n = static_cast<int>(t.rows());
  c.direction = Direction::upper;
  c.method = BoundMethod::direct_matrix;
  c.matrix_name = name;
  c.matrix = t;
  c.measured = radius(t, workers).value;
  c.claimed = detail::to_bound_value(*c.measured);
  c.verified = Verification::verified;
  return c;
}

enum class AlphaSource { exact_enumeration, product_bound };

inline const char* to_string(AlphaSource s) {
  return s == AlphaSource::exact_enumeration ? "exact-enumeration" : "product-bound";
}

struct LowerOptions {
  AlphaSource source = AlphaSource::exact_enumeration;
  std::optional<AlphaRecord> record;  // precomputed enumerated record for n
  int exact_limit = kDefaultExactAlphaLimit;
  int product_base_n = 4;
  std::uint64_t product_terms = 1'000'000;
  unsigned workers = 0;
};

// rho_4 = sqrt(2) feeds the default product bound.
inline ProductBound default_product_bound(int base_n = 4, std::uint64_t terms = 1'000'000) {
  return product_bound(base_n, std::sqrt(2.0), terms);
}

// d(C_n, C_n*) >= sqrt(n) / rho with rho an upper bound on max ||x||_2 / F_n(x).
inline BoundCertificate proven_lower(int n, const LowerOptions& opts = {}) {
  if (n < 1) throw DomainError("dimension must be positive");
  BoundCertificate c;
  c.n = n;
  c.direction = Direction::lower;
  c.method = BoundMethod::alpha_lower;
  if (opts.source == AlphaSource::exact_enumeration) {
    AlphaRecord rec;
    if (n == 1) {
      rec = trivial_alpha_record();
    } else if (opts.record) {
      if (opts.record->n != n || !opts.record->rho_squared) {
        throw ProvenanceError("supplied alpha record is not an exact record for n = " + std::to_string(n));
      }
      rec = *opts.record;
    } else if (n <= opts.exact_limit && n <= kMaxEnumerationDimension) {
      rec = enumerate_candidates(n, opts.workers).record;
    } else {
      throw ProvenanceError("exact rho_" + std::to_string(n) + " is not available (enumeration limit " +
                            std::to_string(opts.exact_limit) + ")");
    }
    c.claimed = BoundValue::of(Surd::sqrt_of(Rational(n) / *rec.rho_squared));
    c.alpha = std::move(rec);
  } else {
    auto pb = product_bound(opts.product_base_n, std::sqrt(2.0), opts.product_terms);
    c.claimed = BoundValue::approximate(std::sqrt(static_cast<double>(n)) / pb.certified);
    c.alpha = pb.record;
  }
  return c;
}

// Recomputes everything a certificate claims from its construction data.
inline Verification verify_certificate(BoundCertificate& c, unsigned workers = 0) {
  bool ok = true;
  switch (c.method) {
    case BoundMethod::block_compose:
    case BoundMethod::hadamard_pad: {
      std::uint64_t total = 0;
      for (const auto& b : c.blocks) total += b.order;
      ok = ok && total == static_cast<std::uint64_t>(c.n) && c.claimed.exact &&
           *c.claimed.exact == detail::analytic_sum(c.blocks);
      if (c.method == BoundMethod::block_compose) {
        c.theorem_bound = (std::sqrt(2.0) + 1.0) * std::sqrt(static_cast<double>(c.n));
        c.theorem_holds = c.claimed.value <= c.theorem_bound + kSurdFallbackTolerance;
        ok = ok && c.theorem_holds;
      }
      if (ok && c.n <= kMeasureLimit) {
        detail::measure_blocks(c, workers);
        ok = leq(detail::to_bound_value(*c.measured), c.claimed);
        c.verified = ok ? Verification::verified : Verification::failed;
      } else {
        c.verified = ok ? Verification::unverified : Verification::failed;
      }
      return c.verified;
    }
    case BoundMethod::alpha_lower: {
      if (!c.alpha) {
        c.verified = Verification::failed;
        return c.verified;
      }
      const AlphaRecord& a = *c.alpha;
      if (a.provenance == AlphaProvenance::product_upper_bound) {
        auto pb = product_bound(a.base_n, a.base_rho, a.terms);
        ok = pb.certified == a.rho &&
             c.claimed.value == std::sqrt(static_cast<double>(c.n)) / pb.certified;
      } else {
        ok = a.rho_squared.has_value() && c.claimed.exact &&
             *c.claimed.exact == Surd::sqrt_of(Rational(c.n) / *a.rho_squared);
        if (ok && a.witness) {
          const auto& w = a.witness->direction;
          ok = big_f(w) == 1 && squared_norm(w) == *a.rho_squared &&
               orth_sign_rank(w).rank + 1 >= static_cast<std::size_t>(c.n);
        }
      }
      c.verified = ok ? Verification::verified : Verification::failed;
      return c.verified;
    }
    case BoundMethod::direct_matrix: {
      if (!c.matrix) {
        c.verified = Verification::failed;
        return c.verified;
      }
      const Scalar r = radius(*c.matrix, workers).value;
      c.measured = r;
      if (r.is_exact()) {
        ok = c.claimed.exact && *c.claimed.exact == Surd(r.rational());
      } else {
        ok = std::fabs(r.floating() - c.claimed.value) <= 1e-12 * std::max(1.0, c.claimed.value);
      }
      c.verified = ok ? Verification::verified : Verification::failed;
      return c.verified;
    }
  }
  return Verification::failed;
}

struct BestKnown {
  BoundValue value;
  std::string source;
};

// Best generator radius known for n: reference matrices for 3..8, the
// identity for n = 1, H_2 for n = 2, measured constructions up to 16, and any
// stored optimizer result that does better.
inline std::optional<BestKnown> best_known(int n, const std::map<int, double>& stored_runs = {}, unsigned workers = 0) {
  std::optional<BestKnown> best;
  auto offer = [&](BoundValue v, std::string source) {
    if (!best || (v.value < best->value.value - kSurdFallbackTolerance)) best = BestKnown{std::move(v), std::move(source)};
  };
  if (n == 1) offer(BoundValue::of(Surd(1L)), "I_1");
  if (n == 2) offer(detail::to_bound_value(radius(sylvester(1).to_matrix(), workers).value), "H_2");
  if (auto ref = reference_matrix(n)) offer(detail::to_bound_value(radius(*ref, workers).value), "reference matrix");
  if (n >= 3 && n <= kMeasureLimit) {
    for (auto cert : {block_compose_upper(n, workers), hadamard_pad_upper(n, workers)}) {
      if (cert.measured) offer(detail::to_bound_value(*cert.measured), cert.construction_text());
    }
  }
  if (auto it = stored_runs.find(n); it != stored_runs.end()) offer(BoundValue::approximate(it->second), "stored optimizer run");
  return best;
}

struct SummaryRow {
  int n = 0;
  BoundCertificate lower;
  BoundCertificate upper;  // the smaller claimed value of block-compose and hadamard-pad
  std::optional<BestKnown> best;
  bool consistent = true;  // lower <= best <= upper
};

struct SummaryOptions {
  int exact_limit = kDefaultExactAlphaLimit;
  std::map<int, double> stored_runs;  // best optimizer radius per n
  unsigned workers = 0;
};

inline std::vector<SummaryRow> summary_table(int n_from, int n_to, const SummaryOptions& opts = {}) {
  if (n_from < 1 || n_from > n_to) throw DomainError("summary range must satisfy 1 <= from <= to");
  std::vector<SummaryRow> rows;
  for (int n = n_from; n <= n_to; ++n) {
    SummaryRow row;
    row.n = n;
    LowerOptions lo;
    lo.source = (n == 1 || n <= std::min(opts.exact_limit, kMaxEnumerationDimension)) ? AlphaSource::exact_enumeration
                                                                                       : AlphaSource::product_bound;
    lo.exact_limit = opts.exact_limit;
    lo.workers = opts.workers;
    row.lower = proven_lower(n, lo);
    verify_certificate(row.lower, opts.workers);
    auto block = block_compose_upper(n, opts.workers);
    auto pad = hadamard_pad_upper(n, opts.workers);
    row.upper = leq(pad.claimed, block.claimed) && !leq(block.claimed, pad.claimed) ? pad : block;
    verify_certificate(row.upper, opts.workers);
    row.best = best_known(n, opts.stored_runs, opts.workers);
    row.consistent = row.lower.verified != Verification::failed && row.upper.verified != Verification::failed;
    if (row.best) {
      row.consistent = row.consistent && leq(row.lower.claimed, row.best->value) && leq(row.best->value, row.upper.claimed);
    } else {
      row.consistent = row.consistent && leq(row.lower.claimed, row.upper.claimed);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bmdist
