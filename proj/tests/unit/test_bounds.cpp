#include <gtest/gtest.h>

#include <numbers>

#include "bmdist/bounds/factory.hpp"
#include "bmdist/reference_matrices.hpp"
#include "oracles.hpp"

using namespace bmdist;

namespace {

Rational q(long p, long d) { return make_rational(Integer(p), Integer(d)); }

const double kSqrt2 = std::numbers::sqrt2;

}  // namespace

TEST(Surd, ToStringAndParseRoundTrip) {
  const Surd cases[] = {Surd(3L), Surd(q(9, 5)), Surd::sqrt_of(Rational(2)), Surd(Rational(1), Rational(1), 2),
                        Surd(Rational(1), Rational(2), 3), Surd(Rational(-1), q(-3, 2), 5), Surd::sqrt_of(q(4, 2))};
  for (const auto& s : cases) {
    const auto back = Surd::parse(s.to_string());
    EXPECT_EQ(back.to_string(), s.to_string());
    EXPECT_EQ(compare(back, s).sign, 0);
  }
  EXPECT_EQ(Surd::sqrt_of(Rational(12)).to_string(), "2*sqrt(3)");
  EXPECT_EQ(Surd::sqrt_of(Rational(16)).to_string(), "4");
  EXPECT_EQ(Surd::sqrt_of(q(1, 2)).to_string(), "1/2*sqrt(2)");
  EXPECT_THROW(Surd::sqrt_of(Rational(-1)), DomainError);
}

TEST(Surd, ExactComparison) {
  // 7/5 < sqrt(2) < 99/70 < 3/2 with one radicand: decided exactly.
  const Surd r2 = Surd::sqrt_of(Rational(2));
  EXPECT_EQ(compare(Surd(q(7, 5)), r2).sign, -1);
  EXPECT_EQ(compare(Surd(q(99, 70)), r2).sign, 1);
  EXPECT_TRUE(compare(Surd(q(99, 70)), r2).exact);
  EXPECT_EQ(compare(Surd(Rational(1), Rational(1), 2), Surd(Rational(1), Rational(1), 2)).sign, 0);
  EXPECT_TRUE(leq(Surd(Rational(3), Rational(1), 2), Surd::sqrt_of(Rational(7)) + Surd(3L)));
  // sqrt(8) + 1 vs sqrt(9) + 3: different radicands, still ordered correctly.
  EXPECT_TRUE(leq(Surd(Rational(1), Rational(2), 2), Surd(6L)));
}

TEST(BlockCompose, Examples) {
  auto four = block_compose_upper(4);
  EXPECT_EQ(four.construction_text(), "H_4");
  EXPECT_EQ(four.claimed.to_string(), "2");
  EXPECT_EQ(four.measured->rational(), 2);

  auto three = block_compose_upper(3);
  EXPECT_EQ(three.construction_text(), "H_2 (+) H_1");
  EXPECT_EQ(three.claimed.to_string(), "1 + sqrt(2)");
  EXPECT_NEAR(three.claimed.value, 2.41421356, 1e-8);
  EXPECT_EQ(three.measured->rational(), 2);

  auto seven = block_compose_upper(7);
  EXPECT_EQ(seven.construction_text(), "H_4 (+) H_2 (+) H_1");
  EXPECT_EQ(seven.claimed.to_string(), "3 + sqrt(2)");
  EXPECT_EQ(seven.measured->rational(), 4);
  EXPECT_TRUE(seven.theorem_holds);

  EXPECT_THROW(block_compose_upper(0), DomainError);
}

TEST(BlockCompose, MeasuredMatchesAssembledOracle) {
  // The 7-dim direct sum through the vertex-by-vertex oracle.
  auto seven = block_compose_upper(7);
  std::vector<RationalMatrix> parts;
  for (const auto& b : seven.blocks) parts.push_back(b.to_matrix().exact());
  const auto whole = direct_sum(std::span<const RationalMatrix>(parts));
  EXPECT_EQ(oracle::naive_radius(whole).value, seven.measured->rational());
}

TEST(HadamardPad, Examples) {
  auto nine = hadamard_pad_upper(9);
  EXPECT_EQ(nine.construction_text(), "I_1 (+) H_8");
  EXPECT_EQ(nine.claimed.to_string(), "1 + 2*sqrt(2)");
  EXPECT_NEAR(nine.claimed.value, 3.82843, 1e-5);
  EXPECT_EQ(nine.within_sqrt_n_plus_3, std::optional<bool>(true));

  auto eight = hadamard_pad_upper(8);
  EXPECT_EQ(eight.construction_text(), "H_8");
  EXPECT_EQ(eight.claimed.to_string(), "2*sqrt(2)");

  auto thirteen = hadamard_pad_upper(13);
  EXPECT_EQ(thirteen.construction_text(), "I_1 (+) H_12");
  EXPECT_NEAR(thirteen.claimed.value, 4.46410, 1e-5);
  EXPECT_EQ(verify_certificate(thirteen), Verification::verified);
}

TEST(UpperBounds, MeasuredNeverExceedsClaimedUpToSixteen) {
  for (int n = 1; n <= 16; ++n) {
    for (auto c : {block_compose_upper(n), hadamard_pad_upper(n)}) {
      ASSERT_TRUE(c.measured) << n;
      EXPECT_TRUE(leq(BoundValue::of(Surd(c.measured->rational())), c.claimed)) << n << " " << c.construction_text();
      EXPECT_EQ(verify_certificate(c), Verification::verified) << n;
    }
  }
}

TEST(UpperBounds, TheoremHoldsUpTo4096) {
  for (int n = 1; n <= 4096; ++n) {
    auto c = block_compose_upper(n, 1);
    ASSERT_TRUE(c.theorem_holds) << n;
    ASSERT_LE(c.claimed.value, (kSqrt2 + 1) * std::sqrt(n) + 1e-12) << n;
  }
}

TEST(UpperBounds, PadWithinSqrtNPlusThreeWhenGapSmall) {
  for (int n = 1; n <= 64; ++n) {
    auto c = hadamard_pad_upper(n, 1);
    const auto gap = static_cast<std::uint64_t>(n) - best_available_order(n).order;
    if (gap <= 3) {
      ASSERT_TRUE(c.within_sqrt_n_plus_3.has_value()) << n;
      EXPECT_TRUE(*c.within_sqrt_n_plus_3) << n;
      EXPECT_LE(c.claimed.value, std::sqrt(n) + 3 + 1e-12) << n;
    } else {
      EXPECT_FALSE(c.within_sqrt_n_plus_3.has_value()) << n;
    }
  }
  // 7 = 4 + 3 is the last small gap; 11 = 8 + 3; 23 = 16 + 7 is flagged.
  EXPECT_FALSE(hadamard_pad_upper(23).within_sqrt_n_plus_3.has_value());
}

TEST(ProvenLower, Examples) {
  auto four = proven_lower(4);
  EXPECT_EQ(four.claimed.to_string(), "sqrt(2)");
  EXPECT_EQ(verify_certificate(four), Verification::verified);

  LowerOptions prod;
  prod.source = AlphaSource::product_bound;
  auto hundred = proven_lower(100, prod);
  EXPECT_NEAR(hundred.claimed.value, 10 / 1.718809224294265, 1e-12);
  // 10/1.71453 with the published constant; the recomputed one is slightly larger.
  EXPECT_NEAR(hundred.claimed.value, 10 / 1.71453, 2e-2);
  EXPECT_EQ(verify_certificate(hundred), Verification::verified);

  auto one = proven_lower(1);
  EXPECT_EQ(one.claimed.to_string(), "1");
}

TEST(ProvenLower, UnavailableExactValueIsProvenanceError) {
  EXPECT_THROW(proven_lower(8), ProvenanceError);
  LowerOptions lo;
  lo.exact_limit = 4;
  EXPECT_THROW(proven_lower(5, lo), ProvenanceError);
  lo.record = trivial_alpha_record();
  EXPECT_THROW(proven_lower(5, lo), ProvenanceError);
}

TEST(ProvenLower, NeverAboveBestKnown) {
  for (int n = 3; n <= 8; ++n) {
    LowerOptions lo;
    lo.source = n <= 6 ? AlphaSource::exact_enumeration : AlphaSource::product_bound;
    auto lower = proven_lower(n, lo);
    auto best = best_known(n);
    ASSERT_TRUE(best) << n;
    EXPECT_TRUE(leq(lower.claimed, best->value)) << n;
  }
}

TEST(Verify, DetectsTampering) {
  auto c = block_compose_upper(5);
  c.claimed = BoundValue::of(Surd(2L));
  EXPECT_EQ(verify_certificate(c), Verification::failed);

  auto d = direct_matrix_upper("dim3", *reference_matrix(3));
  EXPECT_EQ(d.claimed.to_string(), "9/5");
  EXPECT_EQ(verify_certificate(d), Verification::verified);
  d.claimed = BoundValue::of(Surd(q(17, 10)));
  EXPECT_EQ(verify_certificate(d), Verification::failed);

  auto l = proven_lower(4);
  l.alpha->rho_squared = Rational(3);
  EXPECT_EQ(verify_certificate(l), Verification::failed);

  LowerOptions prod;
  prod.source = AlphaSource::product_bound;
  auto p = proven_lower(50, prod);
  p.alpha->rho = 1.5;
  EXPECT_EQ(verify_certificate(p), Verification::failed);
}

TEST(Verify, LargeDimensionsAreUnverifiedNotFailed) {
  auto c = block_compose_upper(1000);
  EXPECT_FALSE(c.measured);
  EXPECT_EQ(verify_certificate(c), Verification::unverified);
}

TEST(BestKnown, ReferenceValues) {
  EXPECT_EQ(best_known(1)->value.to_string(), "1");
  EXPECT_EQ(best_known(2)->value.to_string(), "1");
  EXPECT_EQ(best_known(3)->value.to_string(), "9/5");
  EXPECT_EQ(best_known(4)->value.to_string(), "2");
  EXPECT_NEAR(best_known(5)->value.value, 2.32871, 1e-4);
  EXPECT_NEAR(best_known(6)->value.value, 2.4488, 1e-3);
  EXPECT_EQ(best_known(7)->value.to_string(), "13/5");
  EXPECT_EQ(best_known(8)->value.to_string(), "5/2");
  EXPECT_EQ(best_known(3, {{3, 1.7}})->source, "stored optimizer run");
  EXPECT_EQ(best_known(3, {{3, 1.9}})->source, "reference matrix");
}

TEST(Summary, ExampleRows) {
  auto rows = summary_table(1, 8);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[1].best->value.to_string(), "1");
  EXPECT_EQ(rows[2].best->value.to_string(), "9/5");
  EXPECT_NEAR(rows[5].best->value.value, 2.4488, 1e-3);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.consistent) << r.n;
    EXPECT_TRUE(leq(r.lower.claimed, r.upper.claimed)) << r.n;
  }
  // The dimension-8 value dips below dimension 7.
  EXPECT_LT(rows[7].best->value.value, rows[6].best->value.value);
  EXPECT_THROW(summary_table(5, 4), DomainError);
}

TEST(Summary, ImpossibleStoredValueMakesRowInconsistent) {
  SummaryOptions opts;
  opts.stored_runs[4] = 0.5;  // below the proven lower bound sqrt(2)
  auto rows = summary_table(4, 4, opts);
  EXPECT_FALSE(rows[0].consistent);
}
