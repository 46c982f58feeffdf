#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bmdist/numeric/matrix.hpp"
#include "bmdist/numeric/matrix_io.hpp"
#include "bmdist/numeric/sign_vector.hpp"
#include "bmdist/reference_matrices.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace bmdist;

namespace {

Rational q(long p, long d) { return make_rational(Integer(p), Integer(d)); }

RationalMatrix exact_of(const char* text) { return read_matrix_string(text).exact(); }

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

}  // namespace

TEST(Rational, ParsesLiterals) {
  EXPECT_EQ(parse_rational("-1/3"), q(-1, 3));
  EXPECT_EQ(parse_rational("+2/4"), q(1, 2));
  EXPECT_EQ(parse_rational("0.324842"), q(162421, 500000));
  EXPECT_EQ(parse_rational("-.5"), q(-1, 2));
  EXPECT_EQ(parse_rational("1e-3"), q(1, 1000));
  EXPECT_EQ(parse_rational("0792559"), Rational(792559));
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("1.2.3"), ParseError);
}

TEST(Rational, ToDoubleRoundsCorrectly) {
  EXPECT_EQ(to_double(q(9, 5)), 1.8);
  EXPECT_EQ(to_double(q(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(q(-13, 5)), -2.6);
}

TEST(Scalar, ExactValuesStayReduced) {
  Scalar s = Scalar(q(2, 4)) + Scalar(q(1, 4));
  EXPECT_EQ(s.rational(), q(3, 4));
  EXPECT_EQ(s.rational().get_den(), 4);
}

TEST(Scalar, MixedModeIsRejected) {
  EXPECT_THROW(Scalar(q(1, 2)) + Scalar(0.5), ModeError);
  EXPECT_THROW((void)(Scalar(q(1, 2)) == Scalar(0.5)), ModeError);
  EXPECT_THROW(Matrix::from_scalars(1, 2, {Scalar(1), Scalar(0.5)}), ModeError);
}

TEST(Scalar, DivisionByZero) { EXPECT_THROW(Scalar(1) / Scalar(0), DomainError); }

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(RationalMatrix::identity(3)), 1);
  EXPECT_EQ(determinant(exact_of(reference::kDim3)), q(80, 27));
  RationalMatrix h2{{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}};
  EXPECT_EQ(determinant(h2), -2);
  EXPECT_EQ(determinant(exact_of(reference::kDim4)), 16);
}

TEST(Determinant, AgreesWithCofactorOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const int n = 1 + i % 6;
    RationalMatrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = props::random_unit_rational(rng, 10);
    EXPECT_EQ(determinant(m), oracle::cofactor_determinant(oracle::from(m))) << "case " << i;
  }
}

TEST(Determinant, NonSquareIsDimensionError) {
  EXPECT_THROW(determinant(RationalMatrix(2, 3)), DimensionError);
  EXPECT_THROW(determinant(RealMatrix(3, 2)), DimensionError);
}

TEST(Determinant, FloatAgreesWithExact) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 8;
    RationalMatrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = props::random_unit_rational(rng, 10);
    const double exact = to_double(determinant(m));
    const double approx = determinant(to_real(m));
    if (exact == 0) {
      EXPECT_LT(std::fabs(approx), 1e-12) << i;
    } else {
      EXPECT_NEAR(approx, exact, 1e-9 * std::fabs(exact)) << i;
    }
  }
}

TEST(Determinant, HadamardInequality) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 10;
    RealMatrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = u(rng);
    EXPECT_LE(std::fabs(determinant(m)), std::pow(n, n / 2.0) * (1 + 1e-12)) << i;
  }
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(RationalMatrix::identity(4)), RationalMatrix::identity(4));
  RationalMatrix h2{{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}};
  RationalMatrix half_ht{{q(1, 2), q(1, 2)}, {q(1, 2), q(-1, 2)}};
  EXPECT_EQ(invert(h2), half_ht);
  const auto d4 = exact_of(reference::kDim4);
  EXPECT_EQ(multiply(d4, invert(d4)), RationalMatrix::identity(4));
}

TEST(Invert, ExactProductIsIdentity) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 8;
    const auto m = props::random_exact_generator(rng, n, 10);
    EXPECT_EQ(multiply(m, invert(m)), RationalMatrix::identity(n)) << i;
  }
}

TEST(Invert, FloatProductWithinTolerance) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 8;
    const auto m = props::random_real_generator(rng, n, 1e-2);
    const auto inv = invert(m);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += m(a, k) * inv(k, b);
        EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-10);
      }
  }
}

TEST(Invert, SingularMatrixThrows) {
  RationalMatrix s{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  EXPECT_THROW(invert(s), SingularMatrixError);
  EXPECT_THROW(invert(to_real(s)), SingularMatrixError);
}

TEST(SignVectors, Examples) {
  auto one = sign_vectors(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].coords(), std::vector<int>({1}));
  auto two = sign_vectors(2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].coords(), std::vector<int>({1, 1}));
  EXPECT_EQ(two[1].coords(), std::vector<int>({1, -1}));
  EXPECT_EQ(sign_vectors(5).size(), 16u);
}

TEST(SignVectors, CanonicalNoAntipodesSortedFullSize) {
  for (int n = 1; n <= 14; ++n) {
    auto vs = sign_vectors(n);
    ASSERT_EQ(vs.size(), std::size_t{1} << (n - 1));
    std::set<std::uint32_t> seen;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      EXPECT_TRUE(vs[i].is_canonical());
      EXPECT_EQ(vs[i][0], 1);
      EXPECT_TRUE(seen.insert(vs[i].bits()).second);
      EXPECT_EQ(seen.count(vs[i].negated().bits()), 0u);
      if (i > 0) EXPECT_GT(vs[i - 1].coords(), vs[i].coords()) << "lexicographic with +1 first fails";
    }
  }
}

TEST(SignVectors, CapacityLimits) {
  EXPECT_THROW(sign_vectors(0), CapacityError);
  EXPECT_THROW(sign_vectors(31), CapacityError);
  EXPECT_NO_THROW(check_sign_dimension(30));
}

TEST(SignVectors, GrayCodeNeighboursDifferInOneBit) {
  for (std::uint64_t i = 1; i < 4096; ++i) EXPECT_EQ(std::popcount(gray_code(i) ^ gray_code(i - 1)), 1);
}

TEST(RankOfFamily, Examples) {
  auto sv = [](std::vector<int> c) { return SignVector::from_coords(c); };
  std::vector<SignVector> a = {sv({1, 1, 1}), sv({1, 1, -1})};
  EXPECT_EQ(rank_of_family(a), 2u);
  std::vector<SignVector> b = {sv({1, 1}), sv({-1, -1})};
  EXPECT_EQ(rank_of_family(b), 1u);
  std::vector<SignVector> c = {sv({1, 1, 1, 1}), sv({1, 1, -1, -1}), sv({1, -1, 1, -1})};
  EXPECT_EQ(rank_of_family(c), 3u);
  EXPECT_EQ(rank_of_family(std::vector<SignVector>{}), 0u);
}

TEST(RankOfFamily, AgreesWithOracleOnRandomFamilies) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 7;
    const int m = 1 + static_cast<int>(rng() % (n + 2));
    std::vector<SignVector> fam;
    oracle::RMat rows;
    for (int k = 0; k < m; ++k) {
      auto v = SignVector(n, static_cast<std::uint32_t>(rng() & ((1u << n) - 1)));
      fam.push_back(v);
      std::vector<Rational> r;
      for (int c : v.coords()) r.emplace_back(c);
      rows.push_back(r);
    }
    EXPECT_EQ(rank_of_family(fam), oracle::naive_rank(rows)) << i;
  }
}

TEST(MatrixIo, LoadModeRules) {
  EXPECT_EQ(read_matrix_string("2\n1 0\n0 1\n").mode(), Mode::exact);
  EXPECT_EQ(read_matrix_string("2\n1/2 0\n0 1\n").mode(), Mode::exact);
  EXPECT_EQ(read_matrix_string("2\n0.5 0\n0 1\n").mode(), Mode::floating);
  auto forced = read_matrix_string("2\n0.5 0\n0 1\n", {.force_exact = true});
  ASSERT_EQ(forced.mode(), Mode::exact);
  EXPECT_EQ(forced.exact()(0, 0), q(1, 2));
}

TEST(MatrixIo, MalformedInputs) {
  EXPECT_THROW(read_matrix_string(""), ParseError);
  EXPECT_THROW(read_matrix_string("x\n1\n"), ParseError);
  EXPECT_THROW(read_matrix_string("2\n1 0\n0\n"), ParseError);
  EXPECT_THROW(read_matrix_string("2\n1 0\n0 1 5\n"), ParseError);
  EXPECT_THROW(read_matrix_string("1\nfoo\n"), ParseError);
  EXPECT_THROW(read_matrix_string("0\n"), ParseError);
  EXPECT_THROW(read_matrix_file("/nonexistent/matrix.txt"), ParseError);
}

TEST(MatrixIo, RoundTripExactAndFloat) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 6;
    Matrix e(props::random_exact_generator(rng, n, 97));
    EXPECT_EQ(read_matrix_string(matrix_to_string(e)), e);
    Matrix f(props::random_real_generator(rng, n, 1e-9));
    EXPECT_EQ(read_matrix_string(matrix_to_string(f)), f);
  }
  Matrix whole(RealMatrix{{1.0, 0.0}, {0.0, -1.0}});
  EXPECT_EQ(read_matrix_string(matrix_to_string(whole)), whole);
}

TEST(MatrixIo, DirectSumPlacesBlocksOnDiagonal) {
  std::vector<RationalMatrix> blocks = {RationalMatrix{{Rational(2)}}, RationalMatrix{{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}}};
  auto s = direct_sum(std::span<const RationalMatrix>(blocks));
  ASSERT_EQ(s.rows(), 3u);
  EXPECT_EQ(s(0, 0), 2);
  EXPECT_EQ(s(0, 1), 0);
  EXPECT_EQ(s(2, 2), -1);
  EXPECT_EQ(determinant(s), -4);
}
