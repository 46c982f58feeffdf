#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/matrix.hpp"
#include "bmdist/numeric/sign_vector.hpp"
#include "bmdist/parallel.hpp"

namespace bmdist {

// r(T) = max over cube vertices v of ||T^{-1} v||_1, with the attaining vertex.
struct RadiusResult {
  Scalar value;
  SignVector witness;  // lexicographically smallest canonical maximizer
  Mode mode = Mode::exact;
  std::uint64_t vertex_count = 0;  // canonical vertices scanned, 2^{n-1}
};

struct GeneratorVerdict {
  enum class Reason { ok, entry_out_of_range, singular };
  bool feasible = true;
  Reason reason = Reason::ok;
  std::size_t row = 0;  // first violating entry when reason == entry_out_of_range
  std::size_t col = 0;

  std::string describe() const {
    switch (reason) {
      case Reason::ok:
        return "feasible";
      case Reason::entry_out_of_range:
        return "entry (" + std::to_string(row) + "," + std::to_string(col) + ") has magnitude > 1";
      case Reason::singular:
        return "matrix is singular";
    }
    return "unknown";
  }
};

// Feasible iff every |entry| <= 1 and det(T) != 0. The crosspolytope spanned
// by the rows then lies inside the cube.
inline GeneratorVerdict check_generator(const Matrix& t) {
  if (!t.square()) throw DimensionError("generator must be square");
  GeneratorVerdict v;
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool bad = t.mode() == Mode::exact ? ::abs(t.exact()(i, j)) > 1 : !(std::fabs(t.floating()(i, j)) <= 1.0);
      if (bad) {
        v.feasible = false;
        v.reason = GeneratorVerdict::Reason::entry_out_of_range;
        v.row = i;
        v.col = j;
        return v;
      }
    }
  }
  bool singular = false;
  if (t.mode() == Mode::exact) {
    singular = determinant(t.exact()) == 0;
  } else {
    try {
      (void)invert(t.floating());
    } catch (const SingularMatrixError&) {
      singular = true;
    }
  }
  if (singular) {
    v.feasible = false;
    v.reason = GeneratorVerdict::Reason::singular;
  }
  return v;
}

namespace detail {

// Vertices per scan block. Fixed, so float accumulation order (and thus the
// result) does not depend on how blocks are spread over workers.
inline constexpr std::uint64_t kScanBlock = 1024;

template <class Acc>
struct ScanBest {
  Acc value{};
  std::uint32_t bits = 0;
  bool set = false;

  void offer(const Acc& v, std::uint32_t b) {
    if (!set || v > value || (v == value && b < bits)) {
      value = v;
      bits = b;
      set = true;
    }
  }
  void merge(const ScanBest& o) {
    if (o.set) offer(o.value, o.bits);
  }
};

template <class Acc>
Acc abs_acc(const Acc& x) {
  if constexpr (std::is_floating_point_v<Acc>) {
    return std::fabs(x);
  } else {
    return x < 0 ? Acc(-x) : x;
  }
}

// Full product w = A v for canonical sign bits.
template <class Acc>
void apply_signs(const std::vector<Acc>& a, int n, std::uint32_t bits, std::vector<Acc>& w) {
  for (int i = 0; i < n; ++i) {
    Acc s(0);
    for (int j = 0; j < n; ++j) {
      const bool neg = (bits >> (n - 1 - j)) & 1u;
      if (neg) {
        s -= a[i * n + j];
      } else {
        s += a[i * n + j];
      }
    }
    w[i] = s;
  }
}

// Scans Gray-code indices [begin, end) of the canonical vertices, updating
// w = A v by one column per step.
template <class Acc, class Visit>
void gray_scan(const std::vector<Acc>& a, int n, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  std::vector<Acc> w(n);
  std::uint32_t bits = static_cast<std::uint32_t>(gray_code(begin));
  apply_signs(a, n, bits, w);
  for (std::uint64_t g = begin;;) {
    Acc l1(0);
    for (int i = 0; i < n; ++i) l1 += abs_acc(w[i]);
    visit(l1, bits, w);
    if (++g >= end) break;
    const int b = std::countr_zero(g);
    bits ^= 1u << b;
    const int c = n - 1 - b;
    const bool now_negative = (bits >> b) & 1u;
    for (int i = 0; i < n; ++i) {
      const Acc two_col = a[i * n + c] + a[i * n + c];
      if (now_negative) {
        w[i] -= two_col;
      } else {
        w[i] += two_col;
      }
    }
  }
}

template <class Acc>
ScanBest<Acc> max_l1(const std::vector<Acc>& a, int n, unsigned workers) {
  const std::uint64_t total = canonical_count(n);
  const std::uint64_t blocks = (total + kScanBlock - 1) / kScanBlock;
  std::vector<ScanBest<Acc>> partial(blocks);
  parallel_for(blocks, workers, [&](std::uint64_t blk) {
    const std::uint64_t begin = blk * kScanBlock;
    const std::uint64_t end = std::min(total, begin + kScanBlock);
    ScanBest<Acc> best;
    gray_scan<Acc>(a, n, begin, end, [&](const Acc& l1, std::uint32_t bits, const std::vector<Acc>&) { best.offer(l1, bits); });
    partial[blk] = std::move(best);
  });
  ScanBest<Acc> best;
  for (const auto& p : partial) best.merge(p);
  return best;
}

template <class Acc>
Acc sum_l1(const std::vector<Acc>& a, int n, unsigned workers) {
  const std::uint64_t total = canonical_count(n);
  const std::uint64_t blocks = (total + kScanBlock - 1) / kScanBlock;
  std::vector<Acc> partial(blocks, Acc(0));
  parallel_for(blocks, workers, [&](std::uint64_t blk) {
    const std::uint64_t begin = blk * kScanBlock;
    const std::uint64_t end = std::min(total, begin + kScanBlock);
    Acc s(0);
    gray_scan<Acc>(a, n, begin, end, [&](const Acc& l1, std::uint32_t, const std::vector<Acc>&) { s += l1; });
    partial[blk] = s;
  });
  Acc s(0);
  for (const auto& p : partial) s += p;
  return s;
}

// T^{-1} = A / D with A integer and D the lcm of all denominators.
struct ScaledInverse {
  std::vector<Integer> a;
  Integer denominator;
  Integer abs_total;  // sum of |a_ij|, bounds every ||A v||_1
};

inline ScaledInverse scale_to_integers(const RationalMatrix& inv) {
  ScaledInverse s;
  s.denominator = 1;
  for (const auto& x : inv.data()) s.denominator = lcm(s.denominator, x.get_den());
  s.a.reserve(inv.data().size());
  s.abs_total = 0;
  for (const auto& x : inv.data()) {
    s.a.push_back(x.get_num() * (s.denominator / x.get_den()));
    s.abs_total += ::abs(s.a.back());
  }
  return s;
}

// Dispatches to int64 accumulators when no partial sum can overflow.
template <class Fn>
auto with_integer_accumulator(const ScaledInverse& s, Fn&& fn) {
  static const Integer kLimit = Integer(1) << 61;
  if (s.abs_total < kLimit) {
    std::vector<std::int64_t> a;
    a.reserve(s.a.size());
    for (const auto& z : s.a) a.push_back(z.get_si());
    return fn(a, [](std::int64_t v) { return Integer(static_cast<long>(v)); });
  }
  return fn(s.a, [](const Integer& v) { return v; });
}

inline void check_radius_input(const Matrix& t) {
  if (!t.square()) throw DimensionError("generator must be square");
  const int n = static_cast<int>(t.rows());
  check_sign_dimension(n);
  auto verdict = check_generator(t);
  if (verdict.reason == GeneratorVerdict::Reason::entry_out_of_range) {
    throw InfeasibleGeneratorError("infeasible generator: " + verdict.describe());
  }
  if (verdict.reason == GeneratorVerdict::Reason::singular) throw SingularMatrixError("generator is singular");
}

}  // namespace detail

// ||M v||_1 computed directly (no incremental updates).
inline double l1_of_image(const RealMatrix& m, const SignVector& v) {
  const std::size_t n = m.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[static_cast<int>(j)];
    total += std::fabs(s);
  }
  return total;
}

inline Rational l1_of_image(const RationalMatrix& m, const SignVector& v) {
  const std::size_t n = m.rows();
  Rational total(0);
  for (std::size_t i = 0; i < n; ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < n; ++j) {
      if (v[static_cast<int>(j)] > 0) {
        s += m(i, j);
      } else {
        s -= m(i, j);
      }
    }
    total += ::abs(s);
  }
  return total;
}

// Radius from a precomputed inverse (no feasibility check).
inline RadiusResult radius_of_inverse(const RationalMatrix& inv, unsigned workers = 0) {
  const int n = static_cast<int>(inv.rows());
  check_sign_dimension(n);
  auto scaled = detail::scale_to_integers(inv);
  RadiusResult r;
  r.mode = Mode::exact;
  r.vertex_count = canonical_count(n);
  detail::with_integer_accumulator(scaled, [&](const auto& a, auto to_integer) {
    auto best = detail::max_l1(a, n, workers);
    r.value = Scalar(make_rational(to_integer(best.value), scaled.denominator));
    r.witness = SignVector(n, best.bits);
    return 0;
  });
  return r;
}

inline RadiusResult radius_of_inverse(const RealMatrix& inv, unsigned workers = 0) {
  const int n = static_cast<int>(inv.rows());
  check_sign_dimension(n);
  auto best = detail::max_l1(inv.data(), n, workers);
  RadiusResult r;
  r.mode = Mode::floating;
  r.vertex_count = canonical_count(n);
  r.witness = SignVector(n, best.bits);
  r.value = Scalar(l1_of_image(inv, r.witness));
  return r;
}

// Exact in exact mode; float mode reports the directly recomputed norm at the
// witness. Requires a feasible generator.
inline RadiusResult radius(const Matrix& t, unsigned workers = 0) {
  detail::check_radius_input(t);
  if (t.mode() == Mode::exact) return radius_of_inverse(invert(t.exact()), workers);
  return radius_of_inverse(invert(t.floating()), workers);
}

// Radius of the direct sum of `blocks`: the objective separates over blocks,
// so values add and canonical witnesses concatenate.
inline RadiusResult radius_block(std::span<const Matrix> blocks, unsigned workers = 0) {
  if (blocks.empty()) throw DimensionError("radius_block needs at least one block");
  RadiusResult total;
  bool first = true;
  for (const auto& b : blocks) {
    RadiusResult r = radius(b, workers);
    if (first) {
      total = r;
      first = false;
      continue;
    }
    total.value = total.value + r.value;
    total.witness = total.witness.concat(r.witness);
    total.vertex_count = canonical_count(total.witness.size());
  }
  return total;
}

}  // namespace bmdist
