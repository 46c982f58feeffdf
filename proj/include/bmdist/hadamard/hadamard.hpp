#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/matrix.hpp"

namespace bmdist {

inline constexpr int kMaxSylvesterPower = 20;
inline constexpr std::uint64_t kMaxHadamardOrder = std::uint64_t{1} << kMaxSylvesterPower;
// Largest order we are willing to expand into explicit entries.
inline constexpr std::uint64_t kMaxMaterializedOrder = 4096;

namespace detail {

// Paley type I construction for q = 11, stored as '+'/'-' rows.
inline constexpr std::array<const char*, 12> kHadamard12 = {
    "++++++++++++", "-++-+++---+-", "--++-+++---+", "-+-++-+++---",
    "--+-++-+++--", "---+-++-+++-", "----+-++-+++", "-+---+-++-++",
    "-++---+-++-+", "-+++---+-++-", "--+++---+-++", "-+-+++---+-+",
};

}  // namespace detail

// One Kronecker factor: a Sylvester matrix H_{2^k} or the built-in order 12.
struct HadamardFactor {
  enum class Kind { sylvester, paley12 };
  Kind kind = Kind::sylvester;
  int power = 0;  // for sylvester

  std::uint64_t order() const { return kind == Kind::paley12 ? 12 : (std::uint64_t{1} << power); }

  int entry(std::uint64_t i, std::uint64_t j) const {
    if (kind == Kind::sylvester) return (std::popcount(i & j) & 1) ? -1 : 1;
    return detail::kHadamard12[i][j] == '+' ? 1 : -1;
  }

  std::string name() const {
    return kind == Kind::paley12 ? "H_12" : "H_" + std::to_string(order());
  }

  friend bool operator==(const HadamardFactor&, const HadamardFactor&) = default;
};

// A Hadamard matrix given by its construction: the Kronecker product of its
// factors, left to right. Entries are computed on demand, so large Sylvester
// orders cost nothing until materialized.
class HadamardMatrix {
 public:
  HadamardMatrix() : factors_{HadamardFactor{}} {}
  explicit HadamardMatrix(std::vector<HadamardFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) factors_.push_back(HadamardFactor{});
    std::uint64_t ord = 1;
    for (const auto& f : factors_) {
      ord *= f.order();
      if (ord > kMaxHadamardOrder) throw CapacityError("Hadamard order exceeds 2^20");
    }
    order_ = ord;
  }

  std::uint64_t order() const { return order_; }
  const std::vector<HadamardFactor>& factors() const { return factors_; }

  // Entry ((i_1..i_m),(j_1..j_m)) = prod_k F_k[i_k, j_k] in mixed radix.
  int entry(std::uint64_t i, std::uint64_t j) const {
    int s = 1;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
      const std::uint64_t o = it->order();
      s *= it->entry(i % o, j % o);
      i /= o;
      j /= o;
    }
    return s;
  }

  // Human-readable recipe, e.g. "H_2 (x) H_12".
  std::string recipe() const {
    std::string s;
    for (const auto& f : factors_) {
      if (!s.empty()) s += " (x) ";
      s += f.name();
    }
    return s;
  }

  std::vector<std::int8_t> signs() const {
    if (order_ > kMaxMaterializedOrder) throw CapacityError("Hadamard order too large to materialize");
    std::vector<std::int8_t> out(order_ * order_);
    for (std::uint64_t i = 0; i < order_; ++i)
      for (std::uint64_t j = 0; j < order_; ++j) out[i * order_ + j] = static_cast<std::int8_t>(entry(i, j));
    return out;
  }

  Matrix to_matrix() const {
    auto s = signs();
    std::vector<Rational> d(s.begin(), s.end());
    return Matrix(RationalMatrix(order_, order_, std::move(d)));
  }

 private:
  std::vector<HadamardFactor> factors_;
  std::uint64_t order_ = 1;
};

// H_1 = (1), H_{2m} = [[H_m, H_m], [H_m, -H_m]]; entry (i,j) = (-1)^{popcount(i & j)}.
inline HadamardMatrix sylvester(int k) {
  if (k < 0 || k > kMaxSylvesterPower) throw CapacityError("Sylvester power must be in [0, 20]");
  return HadamardMatrix({HadamardFactor{HadamardFactor::Kind::sylvester, k}});
}

inline HadamardMatrix paley12() { return HadamardMatrix({HadamardFactor{HadamardFactor::Kind::paley12, 0}}); }

// Row index i*order(B) + j, column p*order(B) + q: entry A[i,p] * B[j,q].
inline HadamardMatrix kronecker(const HadamardMatrix& a, const HadamardMatrix& b) {
  std::vector<HadamardFactor> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return HadamardMatrix(std::move(f));
}

namespace detail {

// Rows packed into 64-bit words (bit set for -1), so a row inner product is
// n - 2 * popcount(r_i xor r_j).
inline bool packed_rows_orthogonal(const std::vector<std::vector<std::uint64_t>>& rows, std::uint64_t n) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      std::uint64_t diff = 0;
      for (std::size_t w = 0; w < rows[i].size(); ++w) diff += std::popcount(rows[i][w] ^ rows[j][w]);
      if (2 * diff != n) return false;
    }
  }
  return true;
}

}  // namespace detail

// All entries +-1 and M M^T = n I, checked exactly.
inline bool is_hadamard(const Matrix& m) {
  if (!m.square()) return false;
  const std::size_t n = m.rows();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int s = 0;
      if (m.mode() == Mode::exact) {
        const Rational& x = m.exact()(i, j);
        s = x == 1 ? 1 : (x == -1 ? -1 : 0);
      } else {
        const double x = m.floating()(i, j);
        s = x == 1.0 ? 1 : (x == -1.0 ? -1 : 0);
      }
      if (s == 0) return false;
      if (s < 0) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return detail::packed_rows_orthogonal(rows, n);
}

inline bool is_hadamard(const HadamardMatrix& h) {
  const std::uint64_t n = h.order();
  if (n > kMaxMaterializedOrder) throw CapacityError("Hadamard order too large to verify");
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j)
      if (h.entry(i, j) < 0) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
  return detail::packed_rows_orthogonal(rows, n);
}

// Orders constructible here: 2^a * 12^b, up to 2^20.
struct OrderRecipe {
  std::uint64_t order = 1;
  int sylvester_power = 0;  // a
  int paley_count = 0;      // b

  HadamardMatrix build() const {
    std::vector<HadamardFactor> f;
    if (sylvester_power > 0 || paley_count == 0) f.push_back({HadamardFactor::Kind::sylvester, sylvester_power});
    for (int i = 0; i < paley_count; ++i) f.push_back({HadamardFactor::Kind::paley12, 0});
    return HadamardMatrix(std::move(f));
  }
  std::string recipe() const { return build().recipe(); }
};

// Every registry order, ascending.
inline std::vector<OrderRecipe> registry_orders(std::uint64_t limit = kMaxHadamardOrder) {
  std::vector<OrderRecipe> out;
  std::uint64_t p12 = 1;
  for (int b = 0; p12 <= limit; ++b, p12 *= 12) {
    for (int a = 0; a <= kMaxSylvesterPower; ++a) {
      const std::uint64_t ord = p12 << a;
      if (ord > limit || ord > kMaxHadamardOrder) break;
      out.push_back({ord, a, b});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.order < y.order; });
  return out;
}

// Largest registry order <= n (n >= 1).
inline OrderRecipe best_available_order(std::uint64_t n) {
  if (n < 1) throw DomainError("dimension must be positive");
  OrderRecipe best;
  for (const auto& r : registry_orders(std::min(n, kMaxHadamardOrder))) best = r;
  return best;
}

}  // namespace bmdist
