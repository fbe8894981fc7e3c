#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "g2kit/g2kit.hpp"

using namespace g2kit;
using Q = Rational;

TEST(Scalar, ParseExactRationals) {
  EXPECT_EQ(parse_scalar<Q>("3/5"), Q(3, 5));
  EXPECT_EQ(parse_scalar<Q>("-4/8"), Q(-1, 2));
  EXPECT_EQ(parse_scalar<Q>("+7"), Q(7));
  EXPECT_EQ(to_string(from_ratio<Q>(6, 4)), "3/2");
  EXPECT_EQ(to_string(Q(2)), "2/1");
}

TEST(Scalar, ExactParseRejectsDecimalsAndZeroDenominators) {
  for (const char* bad : {"0.5", "1/0", "", "abc", "1e3"}) {
    try {
      parse_scalar<Q>(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << bad;
    }
  }
}

TEST(Scalar, FloatParseAcceptsDecimalsAndFractions) {
  EXPECT_DOUBLE_EQ(parse_scalar<double>("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(parse_scalar<double>("3/4"), 0.75);
  EXPECT_THROW(parse_scalar<double>("3/0"), Error);
  EXPECT_THROW(parse_scalar<double>("x"), Error);
}

TEST(Scalar, ExactRootsAndSqrt) {
  EXPECT_EQ(exact_root(Q(512, 27), 3), Q(8, 3));
  EXPECT_FALSE(exact_root(Q(2), 2).has_value());
  EXPECT_EQ(sqrt_scalar<Q>(Q(9, 16), "t"), Q(3, 4));
  EXPECT_THROW(sqrt_scalar<Q>(Q(2), "t"), Error);
  EXPECT_DOUBLE_EQ(sqrt_scalar<double>(2.0, "t"), std::sqrt(2.0));
}

namespace {

Matrix<Q> random_rational_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix<Q> m(r, c);
  std::uniform_int_distribution<int> d(-4, 4);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = from_ratio<Q>(d(rng), 1 + (d(rng) + 4) % 3);
  return m;
}

}  // namespace

TEST(Linalg, DeterminantMatchesEigen) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) {
    auto m = random_rational_matrix(rng, 6, 6);
    Matrix<double> md(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) md(i, j) = m(i, j).get_d();
    double ref = to_eigen(md).determinant();
    EXPECT_NEAR(determinant(m).get_d(), ref, 1e-9 * std::max(1.0, std::abs(ref)));
    EXPECT_NEAR(determinant(md), ref, 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Linalg, SolveAndInverseAreExact) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 20; ++n) {
    auto a = random_rational_matrix(rng, 7, 7);
    if (determinant(a) == 0) continue;
    std::vector<Q> b(7);
    for (auto& x : b) x = from_ratio<Q>(static_cast<long>(rng() % 9) - 4, 3);
    auto x = solve(a, b);
    EXPECT_EQ(a * x, b);
    EXPECT_EQ(a * inverse(a), Matrix<Q>::identity(7));
  }
}

TEST(Linalg, SolveReportsInconsistentSystems) {
  Matrix<Q> a(2, 2);
  a(0, 0) = 1;
  a(1, 0) = 2;
  try {
    solve(a, std::vector<Q>{Q(1), Q(3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
  }
}

TEST(Linalg, RankAndNullspaceAreConsistent) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 20; ++n) {
    // rank-deficient by construction: product of 8x3 and 3x8 factors
    auto m = random_rational_matrix(rng, 8, 3) * random_rational_matrix(rng, 3, 8);
    auto r = rank(m);
    auto ns = nullspace(m);
    EXPECT_LE(r, 3u);
    EXPECT_EQ(r + ns.cols(), 8u);
    EXPECT_EQ(max_abs(Matrix<Q>(m * ns)), 0.0);
    Matrix<double> md(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) md(i, j) = m(i, j).get_d();
    EXPECT_EQ(rank(md), r);
    EXPECT_LT(max_abs(Matrix<double>(md * nullspace(md))), 1e-9);
  }
}
