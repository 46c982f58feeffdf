#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bmdist/average/big_f.hpp"
#include "bmdist/errors.hpp"
#include "bmdist/numeric/sign_vector.hpp"
#include "bmdist/parallel.hpp"

namespace bmdist {

// A point of {F_n = 1} orthogonal to at least n-1 independent sign vectors,
// i.e. a vertex of that polytope. Stored in canonical orientation: absolute
// values sorted descending.
struct VertexCandidate {
  std::vector<Rational> direction;  // scaled so F_n(direction) = 1
  std::vector<SignVector> orth_family;
  std::size_t orth_rank = 0;
  Rational ratio_squared;  // ||direction||_2^2

  std::size_t dimension() const { return direction.size(); }
};

enum class AlphaProvenance { enumerated, family_lower_bound, product_upper_bound, trivial };

inline const char* to_string(AlphaProvenance p) {
  switch (p) {
    case AlphaProvenance::enumerated:
      return "enumerated";
    case AlphaProvenance::family_lower_bound:
      return "family-lower-bound";
    case AlphaProvenance::product_upper_bound:
      return "product-upper-bound";
    case AlphaProvenance::trivial:
      return "trivial";
  }
  return "unknown";
}

// rho_n = max ||x||_2 / F_n(x) and alpha_n = 1 / rho_n. For product bounds
// `n` is 0: the value bounds rho_n for every n.
struct AlphaRecord {
  int n = 0;
  std::optional<Rational> rho_squared;  // exact when enumerated
  double rho = 0;
  double alpha = 0;
  AlphaProvenance provenance = AlphaProvenance::enumerated;
  std::optional<VertexCandidate> witness;
  // product-bound inputs
  int base_n = 0;
  double base_rho = 0;
  std::uint64_t terms = 0;
};

inline AlphaRecord exact_alpha_record(int n, const Rational& rho_sq, AlphaProvenance provenance) {
  AlphaRecord r;
  r.n = n;
  r.rho_squared = rho_sq;
  r.rho = std::sqrt(to_double(rho_sq));
  r.alpha = 1.0 / r.rho;
  r.provenance = provenance;
  return r;
}

// F_1(x) = |x|, so rho_1 = 1.
inline AlphaRecord trivial_alpha_record() { return exact_alpha_record(1, Rational(1), AlphaProvenance::trivial); }

inline constexpr int kMaxEnumerationDimension = 7;

namespace detail {

inline constexpr std::size_t kSmallDim = 8;
using SmallRow = std::array<std::int64_t, kSmallDim>;

// Allocation-free echelon basis for +-1 rows with n <= 8.
class SmallEchelon {
 public:
  explicit SmallEchelon(int n) : n_(n) {}

  int rank() const { return rank_; }

  bool push(const SmallRow& row) {
    SmallRow r = row;
    for (int b = 0; b < rank_; ++b) {
      const int p = pivot_[b];
      if (r[p] == 0) continue;
      const std::int64_t f = r[p], g = basis_[b][p];
      std::int64_t content = 0;
      for (int j = 0; j < n_; ++j) {
        r[j] = g * r[j] - f * basis_[b][j];
        content = std::gcd(content, r[j] < 0 ? -r[j] : r[j]);
      }
      if (content > 1)
        for (int j = 0; j < n_; ++j) r[j] /= content;
    }
    int p = 0;
    while (p < n_ && r[p] == 0) ++p;
    if (p == n_) return false;
    basis_[rank_] = r;
    pivot_[rank_] = p;
    ++rank_;
    return true;
  }

  void pop() { --rank_; }

 private:
  int n_;
  int rank_ = 0;
  std::array<SmallRow, kSmallDim> basis_{};
  std::array<int, kSmallDim> pivot_{};
};

using CanonicalKey = std::array<std::int64_t, kSmallDim>;

inline CanonicalKey canonical_key(const std::vector<std::int64_t>& x) {
  CanonicalKey k{};
  for (std::size_t i = 0; i < x.size(); ++i) k[i] = x[i] < 0 ? -x[i] : x[i];
  std::sort(k.begin(), k.begin() + static_cast<long>(x.size()), std::greater<>());
  return k;
}

struct EnumerationWorker {
  int n;
  const std::vector<SmallRow>& vectors;
  std::set<CanonicalKey> found;
  std::uint64_t leaves = 0;
  SmallEchelon echelon;
  std::vector<std::size_t> chosen;

  EnumerationWorker(int dim, const std::vector<SmallRow>& vecs) : n(dim), vectors(vecs), echelon(dim) {}

  void leaf() {
    ++leaves;
    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(chosen.size());
    for (std::size_t idx : chosen) rows.emplace_back(vectors[idx].begin(), vectors[idx].begin() + n);
    found.insert(canonical_key(null_vector(rows, static_cast<std::size_t>(n))));
  }

  // Extends the current independent family with vectors of index >= start.
  void extend(std::size_t start) {
    const int target = n - 1;
    for (std::size_t i = start; i < vectors.size(); ++i) {
      if (echelon.rank() + static_cast<int>(vectors.size() - i) < target) return;
      if (!echelon.push(vectors[i])) continue;
      chosen.push_back(i);
      if (echelon.rank() == target) {
        leaf();
      } else {
        extend(i + 1);
      }
      chosen.pop_back();
      echelon.pop();
    }
  }
};

inline VertexCandidate candidate_from_integer(const CanonicalKey& key, int n) {
  std::vector<Rational> a(key.begin(), key.begin() + n);
  for (auto& v : a) v = Rational(v);
  const Rational f = big_f(a);
  VertexCandidate c;
  c.direction.reserve(n);
  for (const auto& v : a) c.direction.push_back(v / f);
  auto orth = orth_sign_rank(c.direction);
  c.orth_family = std::move(orth.family);
  c.orth_rank = orth.rank;
  c.ratio_squared = squared_norm(c.direction);
  return c;
}

}  // namespace detail

struct CandidateEnumeration {
  AlphaRecord record;
  std::vector<VertexCandidate> candidates;  // one per hyperoctahedral orbit
  std::uint64_t families_visited = 0;        // independent (n-1)-subsets reached
};

// All vertices of {F_n <= 1} up to signed permutation. A vertex is orthogonal
// to n-1 independent sign vectors, and conversely every such direction scaled
// to F_n = 1 is a vertex; so the candidates found by walking all independent
// (n-1)-subsets of canonical sign vectors are exactly the vertex orbits, and
// rho_n^2 is the largest squared norm among them.
inline CandidateEnumeration enumerate_candidates(int n, unsigned workers = 0) {
  if (n < 2) throw DomainError("enumeration needs n >= 2");
  if (n > kMaxEnumerationDimension) throw CapacityError("vertex enumeration supports n <= 7");
  std::vector<detail::SmallRow> vectors;
  for (const auto& v : sign_vectors(n)) {
    detail::SmallRow r{};
    for (int i = 0; i < n; ++i) r[i] = v[i];
    vectors.push_back(r);
  }
  // One task per first family member; results merged in task order.
  std::vector<std::set<detail::CanonicalKey>> found(vectors.size());
  std::vector<std::uint64_t> leaves(vectors.size(), 0);
  parallel_for(vectors.size(), workers, [&](std::uint64_t first) {
    detail::EnumerationWorker w(n, vectors);
    if (n == 2) {
      // A single vector already has rank n-1.
      w.echelon.push(vectors[first]);
      w.chosen.push_back(first);
      w.leaf();
    } else {
      w.echelon.push(vectors[first]);
      w.chosen.push_back(first);
      w.extend(first + 1);
    }
    found[first] = std::move(w.found);
    leaves[first] = w.leaves;
  });
  std::set<detail::CanonicalKey> all;
  CandidateEnumeration out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    all.insert(found[i].begin(), found[i].end());
    out.families_visited += leaves[i];
  }
  // Descending key order: larger leading coordinates first.
  for (auto it = all.rbegin(); it != all.rend(); ++it) out.candidates.push_back(detail::candidate_from_integer(*it, n));

  const VertexCandidate* best = nullptr;
  for (const auto& c : out.candidates) {
    if (c.orth_rank + 1 < static_cast<std::size_t>(n)) throw FamilyError("enumerated candidate fails the rank criterion");
    if (!best || c.ratio_squared > best->ratio_squared) best = &c;
  }
  out.record = exact_alpha_record(n, best->ratio_squared, AlphaProvenance::enumerated);
  out.record.witness = *best;
  return out;
}

// Canonical (sorted descending) form of a nonnegative rational direction.
inline std::vector<Rational> canonical_direction(std::vector<Rational> x) {
  for (auto& v : x) v = ::abs(v);
  std::sort(x.begin(), x.end(), std::greater<>());
  return x;
}

struct FamilyPoint {
  std::string label;  // the unscaled pattern, e.g. "(1,1,1,1,1,3)"
  VertexCandidate candidate;
};

// Known vertex families: for n = 2k the directions (1,...,1) and
// (1,...,1,2j-1), j = 1..k-1; for n = 2k+1 the directions (1,...,1,2j-2),
// j = 1..k-1. Each is scaled to F_n = 1 and checked against the rank
// criterion; a failure throws FamilyError.
inline std::vector<FamilyPoint> known_families(int n) {
  if (n < 2) throw DomainError("known families need n >= 2");
  check_sign_dimension(n);
  std::vector<long> lasts;
  const int k = n / 2;
  if (n % 2 == 0) {
    lasts.push_back(1);
    for (int j = 1; j <= k - 1; ++j) lasts.push_back(2L * j - 1);
  } else {
    for (int j = 1; j <= k - 1; ++j) lasts.push_back(2L * j - 2);
  }
  std::sort(lasts.begin(), lasts.end());
  lasts.erase(std::unique(lasts.begin(), lasts.end()), lasts.end());

  std::vector<FamilyPoint> out;
  for (long last : lasts) {
    std::vector<Rational> x(static_cast<std::size_t>(n), Rational(1));
    x.back() = Rational(last);
    FamilyPoint p;
    p.label = "(";
    for (int i = 0; i < n; ++i) p.label += (i ? "," : "") + to_string(x[i]);
    p.label += ")";
    const Rational f = big_f(x);
    for (auto& v : x) v /= f;
    auto orth = orth_sign_rank(x);
    if (orth.rank + 1 < static_cast<std::size_t>(n)) {
      throw FamilyError("family point " + p.label + " has orthogonal rank " + std::to_string(orth.rank));
    }
    p.candidate.direction = canonical_direction(x);
    p.candidate.orth_family = orth_sign_rank(p.candidate.direction).family;
    p.candidate.orth_rank = orth.rank;
    p.candidate.ratio_squared = squared_norm(x);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bmdist
