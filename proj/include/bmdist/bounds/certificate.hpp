#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bmdist/average/candidates.hpp"
#include "bmdist/bounds/surd.hpp"
#include "bmdist/hadamard/hadamard.hpp"
#include "bmdist/numeric/matrix.hpp"
#include "bmdist/numeric/scalar.hpp"

namespace bmdist {

enum class Direction { upper, lower };
enum class BoundMethod { block_compose, hadamard_pad, alpha_lower, direct_matrix };
enum class Verification { verified, unverified, failed };

inline const char* to_string(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

inline const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::block_compose:
      return "block-compose";
    case BoundMethod::hadamard_pad:
      return "hadamard-pad";
    case BoundMethod::alpha_lower:
      return "alpha-lower";
    case BoundMethod::direct_matrix:
      return "direct-matrix";
  }
  return "unknown";
}

inline const char* to_string(Verification v) {
  switch (v) {
    case Verification::verified:
      return "verified";
    case Verification::unverified:
      return "unverified";
    case Verification::failed:
      return "failed";
  }
  return "unknown";
}

// A bound value: exact surd when one exists, always with a double.
struct BoundValue {
  std::optional<Surd> exact;
  double value = 0;

  static BoundValue of(const Surd& s) { return {s, s.to_double()}; }
  static BoundValue approximate(double v) { return {std::nullopt, v}; }

  std::string to_string() const { return exact ? exact->to_string() : format_double(value); }
};

// x <= y, exactly when both sides are exact (see compare()), else with the
// surd fallback tolerance.
inline bool leq(const BoundValue& x, const BoundValue& y) {
  if (x.exact && y.exact) return leq(*x.exact, *y.exact);
  return x.value <= y.value + kSurdFallbackTolerance;
}

// One diagonal block of an upper-bound construction.
struct ConstructionBlock {
  enum class Kind { identity, hadamard };
  Kind kind = Kind::hadamard;
  std::uint64_t order = 1;
  OrderRecipe recipe;  // for hadamard blocks

  static ConstructionBlock identity(std::uint64_t j) { return {Kind::identity, j, {}}; }
  static ConstructionBlock hadamard(const OrderRecipe& r) { return {Kind::hadamard, r.order, r}; }

  Matrix to_matrix() const {
    if (kind == Kind::identity) return Matrix::identity(order);
    return recipe.build().to_matrix();
  }

  std::string describe() const {
    return kind == Kind::identity ? "I_" + std::to_string(order) : recipe.recipe();
  }

  // sqrt(order) for Hadamard blocks, order for identity blocks.
  Surd analytic_radius() const {
    if (kind == Kind::identity) return Surd(static_cast<long>(order));
    return Surd::sqrt_of(Rational(static_cast<unsigned long>(order)));
  }
};

struct BoundCertificate {
  int n = 0;
  Direction direction = Direction::upper;
  BoundValue claimed;
  BoundMethod method = BoundMethod::block_compose;

  std::vector<ConstructionBlock> blocks;  // block-compose, hadamard-pad
  std::optional<AlphaRecord> alpha;       // alpha-lower
  std::string matrix_name;                // direct-matrix
  std::optional<Matrix> matrix;           // direct-matrix

  std::optional<Scalar> measured;  // radius of the construction when enumerated
  Verification verified = Verification::unverified;

  // Theorem-level checks carried with the certificate.
  double theorem_bound = 0;  // (sqrt(2)+1) sqrt(n) for block-compose
  bool theorem_holds = true;
  std::optional<bool> within_sqrt_n_plus_3;  // hadamard-pad; empty when the gap exceeds 3

  std::string construction_text() const {
    if (method == BoundMethod::alpha_lower) {
      if (!alpha) return "alpha";
      if (alpha->provenance == AlphaProvenance::product_upper_bound) {
        return "product bound from n=" + std::to_string(alpha->base_n) + " over " + std::to_string(alpha->terms) +
               " terms";
      }
      return std::string(to_string(alpha->provenance)) + " rho^2 = " +
             (alpha->rho_squared ? to_string(*alpha->rho_squared) : format_double(alpha->rho * alpha->rho));
    }
    if (method == BoundMethod::direct_matrix) return matrix_name;
    std::string s;
    for (const auto& b : blocks) {
      if (!s.empty()) s += " (+) ";
      s += b.describe();
    }
    return s;
  }
};

}  // namespace bmdist
