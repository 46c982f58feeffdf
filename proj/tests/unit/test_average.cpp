#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <set>

#include "bmdist/average/big_f.hpp"
#include "bmdist/average/candidates.hpp"
#include "bmdist/average/recursion.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace bmdist;

namespace {

Rational q(long p, long d) { return make_rational(Integer(p), Integer(d)); }

std::vector<Rational> vec(std::initializer_list<Rational> xs) { return xs; }

std::set<std::vector<Rational>> directions(const CandidateEnumeration& e) {
  std::set<std::vector<Rational>> out;
  for (const auto& c : e.candidates) out.insert(c.direction);
  return out;
}

const CandidateEnumeration& enumeration(int n) {
  static std::map<int, CandidateEnumeration> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, enumerate_candidates(n)).first;
  return it->second;
}

}  // namespace

TEST(BigF, Examples) {
  for (int n = 1; n <= 8; ++n) {
    std::vector<Rational> e1(n, Rational(0));
    e1[0] = 1;
    EXPECT_EQ(big_f(e1), 1) << n;
  }
  EXPECT_EQ(big_f(vec({1, 1, 1})), q(3, 2));
  EXPECT_EQ(big_f(vec({q(2, 3), q(2, 3), q(2, 3), q(2, 3)})), 1);
  EXPECT_EQ(big_f(vec({1, q(1, 5)})), 1);
  const std::vector<double> d = {1.0, 0.2};
  EXPECT_DOUBLE_EQ(big_f(std::span<const double>(d)), 1.0);
}

TEST(BigF, CapacityLimit) {
  std::vector<Rational> x(25, Rational(1));
  EXPECT_THROW(big_f(x), CapacityError);
  std::vector<Rational> ok(24, Rational(0));
  ok[0] = 1;
  EXPECT_EQ(big_f(ok), 1);
}

TEST(BigF, SecondMomentIdentity) { EXPECT_EQ(props::second_moment(200, 31), ""); }

TEST(BigF, HomogeneitySymmetryAndOracle) { EXPECT_EQ(props::big_f_symmetries(200, 32), ""); }

TEST(Ratio, Examples) {
  EXPECT_EQ(ratio_squared(vec({1, 0, 0})), 1);
  EXPECT_EQ(ratio_squared(vec({1, 1})), 2);
  EXPECT_EQ(ratio_squared(vec({1, 1, 0})), 2);
  EXPECT_THROW(ratio_squared(vec({0, 0})), DomainError);
  const std::vector<double> d = {1.0, 1.0};
  EXPECT_NEAR(ratio(std::span<const double>(d)), std::numbers::sqrt2, 1e-15);
}

TEST(OrthSignRank, Examples) {
  auto a = orth_sign_rank(vec({1, 1, 0, 0}));
  EXPECT_EQ(a.rank, 3u);
  EXPECT_EQ(a.family.size(), 4u);
  for (const auto& v : a.family) {
    EXPECT_EQ(v[0], 1);
    EXPECT_EQ(v[1], -1);
  }
  auto b = orth_sign_rank(vec({1, 0, 0}));
  EXPECT_EQ(b.rank, 0u);
  EXPECT_TRUE(b.family.empty());
  auto c = orth_sign_rank(vec({q(2, 3), q(2, 3), q(2, 3), q(2, 3)}));
  EXPECT_EQ(c.rank, 3u);
  EXPECT_EQ(c.family.size(), 3u);
}

TEST(OrthSignRank, FamilyIsExactlyTheOrthogonalVectors) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 7;
    std::vector<Rational> x(n);
    for (auto& v : x) v = Rational(static_cast<long>(rng() % 4));  // small integers give many zeros
    auto fam = orth_sign_rank(x);
    std::size_t count = 0;
    for (const auto& v : sign_vectors(n)) count += inner(x, v) == 0;
    EXPECT_EQ(fam.family.size(), count);
    for (const auto& v : fam.family) EXPECT_EQ(inner(x, v), 0);
  }
}

TEST(Enumerate, SmallDimensionsMatchKnownVertexSets) {
  EXPECT_EQ(directions(enumeration(2)), (std::set<std::vector<Rational>>{vec({1, 1})}));
  EXPECT_EQ(directions(enumeration(3)), (std::set<std::vector<Rational>>{vec({1, 1, 0})}));
  const auto d4 = directions(enumeration(4));
  EXPECT_TRUE(d4.count(vec({1, 1, 0, 0})));
  EXPECT_TRUE(d4.count(vec({q(2, 3), q(2, 3), q(2, 3), q(2, 3)})));
  for (int n = 2; n <= 4; ++n) {
    EXPECT_EQ(*enumeration(n).record.rho_squared, 2) << n;
    EXPECT_EQ(enumeration(n).record.provenance, AlphaProvenance::enumerated);
  }
}

TEST(Enumerate, AgreesWithBruteForceOracle) {
  for (int n = 2; n <= 6; ++n) {
    const auto brute = oracle::brute_force_vertices(n);
    EXPECT_EQ(directions(enumeration(n)), brute.canonical) << n;
    EXPECT_EQ(*enumeration(n).record.rho_squared, brute.rho_squared) << n;
  }
}

TEST(Enumerate, FrozenFindingsForFiveAndSix) {
  EXPECT_EQ(enumeration(5).candidates.size(), 3u);
  EXPECT_EQ(*enumeration(5).record.rho_squared, 2);
  EXPECT_EQ(enumeration(6).candidates.size(), 7u);
  EXPECT_EQ(*enumeration(6).record.rho_squared, 2);
}

TEST(Enumerate, CandidatesSatisfyTypeInvariants) {
  for (int n = 2; n <= 6; ++n) {
    for (const auto& c : enumeration(n).candidates) {
      EXPECT_EQ(big_f(c.direction), 1);
      EXPECT_EQ(squared_norm(c.direction), c.ratio_squared);
      EXPECT_GE(c.orth_rank + 1, static_cast<std::size_t>(n));
      for (const auto& v : c.orth_family) EXPECT_EQ(inner(c.direction, v), 0);
      EXPECT_TRUE(std::is_sorted(c.direction.begin(), c.direction.end(), std::greater<>()));
      EXPECT_GE(c.direction.back(), 0);
    }
    const auto& r = enumeration(n).record;
    EXPECT_GE(r.rho, 1.0);
    EXPECT_DOUBLE_EQ(r.alpha, 1.0 / r.rho);
  }
}

TEST(Enumerate, WorkerCountDoesNotChangeResult) {
  auto a = enumerate_candidates(5, 1);
  auto b = enumerate_candidates(5, 3);
  ASSERT_EQ(a.candidates.size(), b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) EXPECT_EQ(a.candidates[i].direction, b.candidates[i].direction);
  EXPECT_EQ(a.families_visited, b.families_visited);
}

TEST(Enumerate, RangeErrors) {
  EXPECT_THROW(enumerate_candidates(1), DomainError);
  EXPECT_THROW(enumerate_candidates(8), CapacityError);
}

TEST(Enumerate, DominatesRandomSampling) {
  std::mt19937_64 rng(34);
  for (int n = 2; n <= 6; ++n) {
    const double rho = enumeration(n).record.rho;
    double best = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto x = props::random_unit_direction(rng, n);
      best = std::max(best, ratio(std::span<const double>(x)));
    }
    EXPECT_LE(best, rho * (1 + 1e-12)) << n;
  }
}

TEST(Enumerate, ConsecutiveRhoRespectRecursionBound) {
  for (int n = 2; n <= 5; ++n) {
    const Rational b = recursion_factor(n).bound;
    EXPECT_LE(*enumeration(n + 1).record.rho_squared, *enumeration(n).record.rho_squared * b * b) << n;
  }
}

TEST(KnownFamilies, Examples) {
  auto six = known_families(6);
  ASSERT_EQ(six.size(), 2u);
  EXPECT_EQ(six[0].label, "(1,1,1,1,1,1)");
  EXPECT_EQ(six[0].candidate.ratio_squared, q(128, 75));
  EXPECT_EQ(six[1].label, "(1,1,1,1,1,3)");
  EXPECT_EQ(six[1].candidate.ratio_squared, q(896, 625));
  auto seven = known_families(7);
  bool found = false;
  for (const auto& p : seven) {
    if (p.label == "(1,1,1,1,1,1,2)") {
      found = true;
      EXPECT_EQ(p.candidate.ratio_squared, q(8, 5));
    }
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(known_families(1), DomainError);
}

TEST(KnownFamilies, PassRankCriterionUpToEight) {
  for (int n = 2; n <= 8; ++n) {
    std::vector<FamilyPoint> pts;
    ASSERT_NO_THROW(pts = known_families(n)) << n;
    for (const auto& p : pts) {
      EXPECT_GE(p.candidate.orth_rank + 1, static_cast<std::size_t>(n)) << p.label;
      EXPECT_EQ(big_f(p.candidate.direction), 1) << p.label;
    }
  }
}

TEST(KnownFamilies, ContainedInEnumeration) {
  for (int n = 2; n <= 6; ++n) {
    const auto dirs = directions(enumeration(n));
    for (const auto& p : known_families(n)) {
      EXPECT_TRUE(dirs.count(p.candidate.direction)) << p.label;
      EXPECT_LE(p.candidate.ratio_squared, *enumeration(n).record.rho_squared);
    }
  }
}

TEST(SplitIdentities, Examples) {
  auto a = split_identities_check(vec({1, 1, 1}));
  EXPECT_TRUE(a.holds());
  auto b = split_identities_check(vec({1, 0}));
  EXPECT_TRUE(b.holds());
  EXPECT_EQ(b.y1, vec({1}));
  EXPECT_EQ(b.y2, vec({1}));
  EXPECT_TRUE(split_identities_check(vec({3, 2, 1})).holds());
  EXPECT_THROW(split_identities_check(vec({1, 2})), PreconditionError);
  EXPECT_THROW(split_identities_check(vec({1, -1})), PreconditionError);
  EXPECT_THROW(split_identities_check(vec({1})), PreconditionError);
}

TEST(SplitIdentities, RandomSortedInputs) { EXPECT_EQ(props::split_identities(100, 35), ""); }

TEST(RecursionFactor, Examples) {
  auto four = recursion_factor(4);
  EXPECT_NEAR(four.factor, 1.0215482184460996, 1e-15);
  EXPECT_EQ(four.bound, q(19, 18));
  EXPECT_TRUE(four.holds);
  auto nine = recursion_factor(9);
  EXPECT_NEAR(nine.factor, 1.0050896200520817, 1e-15);
  EXPECT_LE(nine.factor, 1.0 + 1.0 / 128);
  EXPECT_NEAR(recursion_factor(1000000).factor, 1.0, 1e-6);
  EXPECT_THROW(recursion_factor(1), DomainError);
}

TEST(RecursionFactor, InequalityHoldsOverSampledRange) { EXPECT_EQ(props::recursion_inequality(), ""); }

TEST(ProductBound, BaseFour) {
  auto p = product_bound(4, std::numbers::sqrt2, 1000000);
  EXPECT_NEAR(p.truncated, 1.7188083648915865, 1e-12);
  EXPECT_NEAR(p.certified, 1.718809224294265, 1e-12);
  EXPECT_GE(p.certified, 1.70);
  EXPECT_LE(p.certified, 1.73);
  EXPECT_NEAR(p.certified, 1.71453, 1e-2);
  // The certified value must dominate the full infinite product.
  EXPECT_GE(p.certified, 1.7188092242938353);
  EXPECT_EQ(p.record.provenance, AlphaProvenance::product_upper_bound);
  EXPECT_DOUBLE_EQ(p.record.alpha, 1 / p.certified);
}

TEST(ProductBound, BaseNineAndSingleTerm) {
  auto p9 = product_bound(9, std::numbers::sqrt2, 1000000);
  EXPECT_NEAR(p9.truncated, 1.5114115851970788, 1e-12);
  EXPECT_NEAR(p9.certified, 1.5114123408977704, 1e-12);
  EXPECT_NEAR(p9.certified, 1.50765, 1e-2);
  auto one = product_bound(4, std::numbers::sqrt2, 1);
  EXPECT_NEAR(one.truncated, std::numbers::sqrt2 * (1 + 1.0 / 18), 1e-15);
  EXPECT_NEAR(one.truncated, 1.4927809825049337, 1e-15);
  EXPECT_NEAR(one.certified, 1.7635123578100131, 1e-12);
  EXPECT_NEAR(one.certified, one.truncated * one.tail_factor, 1e-15);
}

TEST(ProductBound, Errors) {
  EXPECT_THROW(product_bound(1, std::numbers::sqrt2, 10), DomainError);
  EXPECT_THROW(product_bound(4, std::numbers::sqrt2, 0), DomainError);
  EXPECT_THROW(product_bound(4, 0.5, 10), DomainError);
}

TEST(Lipschitz, Examples) {
  const std::vector<double> x = {0.6, 0.8};
  auto same = lipschitz_spot_check(x, x);
  EXPECT_TRUE(same.holds);
  EXPECT_NEAR(same.angle, 0.0, 1e-7);
  const std::vector<double> e1 = {1.0, 0.0}, e2 = {0.0, 1.0};
  auto orth = lipschitz_spot_check(e1, e2);
  EXPECT_TRUE(orth.holds);
  EXPECT_DOUBLE_EQ(orth.f_x, 1.0);
  EXPECT_DOUBLE_EQ(orth.f_y, 1.0);
  EXPECT_NEAR(orth.angle, std::numbers::pi / 2, 1e-15);
  const std::vector<double> bad = {1.0, 1.0};
  EXPECT_THROW(lipschitz_spot_check(e1, bad), PreconditionError);
}

TEST(Lipschitz, RandomPairs) { EXPECT_EQ(props::lipschitz(1000, 36), ""); }
