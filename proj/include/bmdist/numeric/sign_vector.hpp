#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/matrix.hpp"
#include "bmdist/numeric/rational.hpp"

namespace bmdist {

inline constexpr int kMaxSignDimension = 30;

// An element of {-1,+1}^n packed into a word. Coordinate i is stored in bit
// (n-1-i), set meaning -1, so for canonical vectors (coordinate 0 is +1) the
// numeric order of `bits` is the lexicographic order with +1 before -1.
class SignVector {
 public:
  constexpr SignVector() = default;
  constexpr SignVector(int n, std::uint32_t bits) : n_(static_cast<std::uint8_t>(n)), bits_(bits) {}

  static SignVector from_coords(std::span<const int> coords) {
    const int n = static_cast<int>(coords.size());
    if (n < 1 || n > kMaxSignDimension) throw CapacityError("sign vector dimension out of range");
    std::uint32_t bits = 0;
    for (int i = 0; i < n; ++i) {
      if (coords[i] != 1 && coords[i] != -1) throw DomainError("sign vector coordinate must be +-1");
      if (coords[i] < 0) bits |= 1u << (n - 1 - i);
    }
    return {n, bits};
  }

  constexpr int size() const { return n_; }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int operator[](int i) const { return (bits_ >> (n_ - 1 - i)) & 1u ? -1 : 1; }

  constexpr bool is_canonical() const { return ((bits_ >> (n_ - 1)) & 1u) == 0; }
  constexpr SignVector negated() const { return {n_, bits_ ^ mask()}; }
  constexpr SignVector canonical() const { return is_canonical() ? *this : negated(); }

  // Concatenation (this first).
  SignVector concat(const SignVector& tail) const {
    if (n_ + tail.n_ > kMaxSignDimension) throw CapacityError("concatenated sign vector too long");
    return {n_ + tail.n_, (bits_ << tail.n_) | tail.bits_};
  }

  std::vector<int> coords() const {
    std::vector<int> c(n_);
    for (int i = 0; i < n_; ++i) c[i] = (*this)[i];
    return c;
  }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < n_; ++i) {
      if (i) s += ',';
      s += (*this)[i] > 0 ? "+1" : "-1";
    }
    return s + ")";
  }

  // Compact form: '+' / '-' per coordinate.
  std::string pattern() const {
    std::string s;
    for (int i = 0; i < n_; ++i) s += (*this)[i] > 0 ? '+' : '-';
    return s;
  }

  friend constexpr bool operator==(const SignVector&, const SignVector&) = default;
  friend constexpr auto operator<=>(const SignVector& a, const SignVector& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    // Lexicographic with +1 < -1 is the numeric order of the packed bits.
    return a.bits_ <=> b.bits_;
  }

 private:
  constexpr std::uint32_t mask() const { return n_ >= 32 ? ~0u : ((1u << n_) - 1u); }

  std::uint8_t n_ = 0;
  std::uint32_t bits_ = 0;
};

inline void check_sign_dimension(int n) {
  if (n < 1 || n > kMaxSignDimension) {
    throw CapacityError("dimension " + std::to_string(n) + " outside [1, " + std::to_string(kMaxSignDimension) + "]");
  }
}

inline std::uint64_t canonical_count(int n) { return std::uint64_t{1} << (n - 1); }

// All 2^{n-1} canonical sign vectors in lexicographic order.
inline std::vector<SignVector> sign_vectors(int n) {
  check_sign_dimension(n);
  const std::uint64_t count = canonical_count(n);
  std::vector<SignVector> out;
  out.reserve(count);
  for (std::uint64_t b = 0; b < count; ++b) out.emplace_back(n, static_cast<std::uint32_t>(b));
  return out;
}

// Binary-reflected Gray code; consecutive codes differ in bit ctz(i).
constexpr std::uint64_t gray_code(std::uint64_t i) { return i ^ (i >> 1); }

// Row-echelon basis over Q that supports push/pop of single rows. Rows are
// kept primitive (divided by their content), so with Int = int64_t it is
// exact for the +-1 families used here up to n = 8; use mpz for larger n.
template <class Int>
class IncrementalRank {
 public:
  explicit IncrementalRank(std::size_t n) : n_(n) {}

  std::size_t dimension() const { return n_; }
  std::size_t rank() const { return pivots_.size(); }

  // Adds `row` if independent of the current basis; returns whether it was.
  bool push(std::span<const Int> row) {
    if (row.size() != n_) throw DimensionError("row length mismatch");
    std::vector<Int> r(row.begin(), row.end());
    for (std::size_t b = 0; b < pivots_.size(); ++b) {
      const std::size_t p = pivots_[b];
      if (r[p] == 0) continue;
      const Int f = r[p];
      const Int g = basis_[b][p];
      for (std::size_t j = 0; j < n_; ++j) r[j] = g * r[j] - f * basis_[b][j];
      normalize(r);
    }
    std::size_t p = 0;
    while (p < n_ && r[p] == 0) ++p;
    if (p == n_) return false;
    basis_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  bool push(const SignVector& v) { return push(std::span<const Int>(as_row(v))); }

  // Removes the most recently accepted row.
  void pop() {
    if (pivots_.empty()) throw PreconditionError("pop on empty basis");
    basis_.pop_back();
    pivots_.pop_back();
  }

  bool would_increase(std::span<const Int> row) {
    if (!push(row)) return false;
    pop();
    return true;
  }

  static std::vector<Int> as_row(const SignVector& v) {
    std::vector<Int> r(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) r[i] = Int(v[i]);
    return r;
  }

 private:
  static Int abs_of(const Int& x) { return x < 0 ? Int(-x) : x; }

  static Int gcd_of(Int a, Int b) {
    a = abs_of(a);
    b = abs_of(b);
    while (b != 0) {
      Int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static void normalize(std::vector<Int>& r) {
    Int g(0);
    for (const auto& x : r)
      if (x != 0) g = gcd_of(g, x);
    if (g > 1)
      for (auto& x : r) x /= g;
  }

  std::size_t n_;
  std::vector<std::vector<Int>> basis_;
  std::vector<std::size_t> pivots_;
};

// Rank over Q of integer rows. An empty family has rank 0.
inline std::size_t rank_of_rows(const std::vector<std::vector<long>>& rows) {
  if (rows.empty()) return 0;
  IncrementalRank<Integer> acc(rows.front().size());
  for (const auto& r : rows) {
    std::vector<Integer> z(r.begin(), r.end());
    acc.push(std::span<const Integer>(z));
  }
  return acc.rank();
}

inline std::size_t rank_of_family(std::span<const SignVector> family) {
  if (family.empty()) return 0;
  const int n = family.front().size();
  IncrementalRank<Integer> acc(static_cast<std::size_t>(n));
  for (const auto& v : family) {
    if (v.size() != n) throw DimensionError("sign vectors of different dimensions");
    acc.push(v);
  }
  return acc.rank();
}

// Generator of the one-dimensional null space of n-1 independent integer
// rows in Z^n, via signed maximal minors; returned primitive with its first
// nonzero coordinate positive.
template <class Int>
std::vector<Int> null_vector(const std::vector<std::vector<Int>>& rows, std::size_t n) {
  if (rows.size() + 1 != n) throw DimensionError("null_vector expects n-1 rows");
  const std::size_t m = n - 1;
  std::vector<Int> x(n);
  std::vector<Int> minor(m * m);
  for (std::size_t skip = 0; skip < n; ++skip) {
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == skip) continue;
        minor[i * m + c++] = rows[i][j];
      }
    }
    Int det = detail::bareiss_determinant(minor, m);
    x[skip] = (skip % 2 == 0) ? det : Int(-det);
  }
  Int g(0);
  for (const auto& v : x) {
    Int a = v < 0 ? Int(-v) : v;
    Int b = g;
    while (b != 0) {
      Int t = a % b;
      a = b;
      b = t;
    }
    g = a;
  }
  if (g == 0) throw DimensionError("rows are dependent; null space is not one-dimensional");
  std::size_t lead = 0;
  while (x[lead] == 0) ++lead;
  const bool flip = x[lead] < 0;
  for (auto& v : x) {
    v /= g;
    if (flip) v = -v;
  }
  return x;
}

}  // namespace bmdist
