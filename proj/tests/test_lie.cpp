#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <random>

#include "oracles.hpp"

using namespace g2kit;
using Q = Rational;

namespace {

template <class Code>
void expect_code(Code code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

Matrix<Q> diag(std::initializer_list<int> d) {
  Matrix<Q> m(7, 7);
  int i = 0;
  for (int x : d) m(i, i) = x, ++i;
  return m;
}

/// Rotation by the Pythagorean angle (cos, sin) = (3/5, 4/5) in the (i, j) plane, 1-based.
Matrix<Q> rotation(int i, int j, int sign = 1) {
  Matrix<Q> m = Matrix<Q>::identity(7);
  m(i - 1, i - 1) = m(j - 1, j - 1) = Q(3, 5);
  m(i - 1, j - 1) = from_ratio<Q>(-4 * sign, 5);
  m(j - 1, i - 1) = from_ratio<Q>(4 * sign, 5);
  return m;
}

/// φ₀(gu, gv, gw) = φ₀(u, v, w) on all basis triples.
bool oracle_fixes_phi0(const Matrix<Q>& g) {
  auto phi = oracle::phi0_literal<Q>();
  for (const auto& idx : oracle::increasing_tuples(3)) {
    std::vector<std::array<Q, 7>> vs, gvs;
    for (int i : idx) {
      vs.push_back(oracle::e<Q>(i));
      gvs.push_back(oracle::mul(g, oracle::e<Q>(i)));
    }
    if (oracle::evaluate(phi, gvs) != oracle::evaluate(phi, vs)) return false;
  }
  return true;
}

Matrix<Q> elementary(int i, int j) {  // E_ij − E_ji, 1-based
  Matrix<Q> m(7, 7);
  m(i - 1, j - 1) = 1;
  m(j - 1, i - 1) = -1;
  return m;
}

}  // namespace

TEST(Lie, ExpmMatchesEigen) {
  std::mt19937_64 rng(60);
  for (double scale : {0.1, 1.0, 5.0}) {
    Matrix<double> a(7, 7);
    std::normal_distribution<double> normal(0.0, scale);
    for (std::size_t i = 0; i < 49; ++i) a(i / 7, i % 7) = normal(rng);
    Eigen::MatrixXd ref = Eigen::MatrixXd(to_eigen(a)).exp();
    auto mine = to_eigen(expm(a));
    EXPECT_LT((mine - ref).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff())) << scale;
  }
  expect_code(ErrorCode::kInexact, [] { expm(Matrix<Q>::identity(7)); });
}

TEST(Lie, IsSo7Examples) {
  EXPECT_TRUE(is_so7(Matrix<Q>::identity(7)));
  EXPECT_TRUE(is_so7(rotation(1, 2)));
  EXPECT_TRUE(is_so7(diag({-1, -1, 1, 1, 1, 1, 1})));
  EXPECT_FALSE(is_so7(diag({-1, 1, 1, 1, 1, 1, 1})));
  EXPECT_FALSE(is_so7(Matrix<Q>(Matrix<Q>::identity(7) * Q(2))));
  EXPECT_FALSE(is_so7(Matrix<Q>::identity(6)));
}

TEST(Lie, IsG2Examples) {
  EXPECT_TRUE(is_g2(Matrix<Q>::identity(7)));
  EXPECT_TRUE(is_g2(diag({1, 1, 1, -1, -1, -1, -1})));
  EXPECT_FALSE(is_g2(diag({-1, -1, 1, 1, 1, 1, 1})));
  EXPECT_FALSE(is_g2(rotation(1, 2)));
  // orientation-reversing maps never qualify even when they fix φ₀ up to sign
  EXPECT_FALSE(is_g2(Matrix<Q>(Matrix<Q>::identity(7) * Q(-1))));
}

TEST(Lie, IsG2MatchesEvaluationOracle) {
  std::vector<Matrix<Q>> candidates;
  for (int a = 2; a <= 7; a += 2)
    for (int b = 2; b <= 7; b += 2)
      for (int sa : {1, -1})
        for (int sb : {1, -1})
          if (a != b) candidates.push_back(rotation(a, a + 1, sa) * rotation(b, b + 1, sb));
  int members = 0;
  for (const auto& g : candidates) {
    bool expected = oracle_fixes_phi0(g);
    EXPECT_EQ(is_g2(g), expected);
    members += expected;
  }
  EXPECT_GT(members, 0);
  EXPECT_LT(members, static_cast<int>(candidates.size()));
}

TEST(Lie, G2AlgebraHasDimension14AndIsClosed) {
  auto g2 = g2_algebra_basis(standard_structure<Q>());
  EXPECT_EQ(g2.dim(), 14u);
  EXPECT_TRUE(bracket_closed(g2.matrices()));
  auto s = standard_structure<Q>();
  for (const auto& a : g2.matrices()) EXPECT_TRUE(infinitesimal_action(a, s).is_zero(0.0));
  // g2 is maximal in so(7): one extra direction breaks closure
  auto bigger = g2.matrices();
  bigger.push_back(elementary(1, 2));
  EXPECT_EQ(span_dimension(bigger), 15u);
  EXPECT_FALSE(bracket_closed(bigger));
}

TEST(Lie, G2ExponentiatesIntoG2) {
  auto s = standard_structure<double>();
  auto g2 = g2_algebra_basis(s);
  std::mt19937_64 rng(61);
  for (int n = 0; n < 10; ++n) EXPECT_TRUE(is_g2(random_g2_element(rng, g2), 1e-9));
}

TEST(Lie, NormalizerExamples) {
  auto so7 = so7_algebra<Q>();
  auto g2 = g2_algebra_basis(standard_structure<Q>());
  EXPECT_EQ(lie_normalizer(so7, g2).dim(), 14u);
  EXPECT_EQ(lie_normalizer(so7, so7).dim(), 21u);
  EXPECT_EQ(lie_normalizer(g2, g2).dim(), 14u);
  // span{E12} inside so(3) on the first three axes is self-normalizing
  SubalgebraBasis<Q> so3({elementary(1, 2), elementary(1, 3), elementary(2, 3)});
  SubalgebraBasis<Q> cartan({elementary(1, 2)});
  EXPECT_EQ(lie_normalizer(so3, cartan).dim(), 1u);
  // in so(7) it picks up the commuting so(5) on axes 3..7
  EXPECT_EQ(lie_normalizer(so7, cartan).dim(), 11u);
}

TEST(Lie, NormalizerRejectsBadInputs) {
  SubalgebraBasis<Q> so3({elementary(1, 2), elementary(1, 3), elementary(2, 3)});
  SubalgebraBasis<Q> outside({elementary(4, 5)});
  expect_code(ErrorCode::kNotSubalgebra, [&] { lie_normalizer(so3, outside); });
  SubalgebraBasis<Q> open({elementary(1, 2), elementary(1, 3)});
  expect_code(ErrorCode::kNotSubalgebra, [&] { lie_normalizer(so3, open); });
  expect_code(ErrorCode::kInvalidArgument, [] { SubalgebraBasis<Q>({elementary(1, 2), elementary(1, 2)}); });
  expect_code(ErrorCode::kInvalidArgument, [] { SubalgebraBasis<Q>({Matrix<Q>::identity(7)}); });
}

TEST(Lie, NfMemberExamples) {
  Matrix<Q> h = diag({1, 1, 1, -1, -1, -1, -1});
  HolonomySpec<Q> hol({h});
  EXPECT_TRUE(nf_member(Matrix<Q>::identity(7), HolonomySpec<Q>::trivial()));
  EXPECT_TRUE(nf_member(rotation(1, 2), HolonomySpec<Q>::trivial()));
  EXPECT_TRUE(nf_member(Matrix<Q>::identity(7), hol));
  // commutes with h, so g⁻¹hg = h ∈ G2
  EXPECT_TRUE(nf_member(diag({-1, -1, 1, 1, 1, 1, 1}), hol));
  // mixes a fixed axis with a flipped one
  EXPECT_FALSE(nf_member(rotation(1, 4), hol));
  expect_code(ErrorCode::kNotOrthogonal, [&] { nf_member(diag({-1, 1, 1, 1, 1, 1, 1}), hol); });
  expect_code(ErrorCode::kNotOrthogonal, [] { HolonomySpec<Q>({Matrix<Q>(Matrix<Q>::identity(7) * Q(2))}); });
}

TEST(Lie, NfMemberIsConjugationCovariant) {
  auto s = standard_structure<double>();
  auto g2 = g2_algebra_basis(s);
  std::mt19937_64 rng(62);
  HolonomySpec<double> hol({random_g2_element(rng, g2), random_g2_element(rng, g2)}, 1e-9);
  for (int n = 0; n < 10; ++n) {
    Matrix<double> g = n % 2 ? random_g2_element(rng, g2) : expm(random_antisymmetric<double>(rng));
    bool direct = nf_member(g, hol, 1e-8);
    bool moved = nf_member(Matrix<double>::identity(7), hol.conjugated(g, 1e-9), 1e-8);
    EXPECT_EQ(direct, moved) << n;
    if (n % 2) EXPECT_TRUE(direct);
  }
}

TEST(Lie, CosetTangentDimExamples) {
  auto sq = standard_structure<Q>();
  EXPECT_EQ(coset_tangent_dim(HolonomySpec<Q>::trivial(), sq), 7u);
  EXPECT_EQ(coset_tangent_dim(HolonomySpec<Q>({Matrix<Q>::identity(7)}), sq), 7u);
  expect_code(ErrorCode::kInvalidArgument, [&] { coset_tangent_dim(HolonomySpec<Q>({rotation(1, 2)}), sq); });

  auto s = standard_structure<double>(1e-8);
  auto g2 = g2_algebra_basis(s);
  std::mt19937_64 rng(63);
  HolonomySpec<double> dense({random_g2_element(rng, g2), random_g2_element(rng, g2)}, 1e-9);
  EXPECT_EQ(coset_tangent_dim(dense, s), 0u);
  EXPECT_EQ(coset_tangent_dim(model_holonomy_samples(ModelKind::kS1xCY3, rng), s), 1u);
  EXPECT_EQ(coset_tangent_dim(model_holonomy_samples(ModelKind::kT3xK3, rng), s), 3u);
}

TEST(Lie, HolonomyAlgebraDimensions) {
  EXPECT_EQ(model_holonomy_algebra_dim(ModelKind::kT7), 0u);
  EXPECT_EQ(model_holonomy_algebra_dim(ModelKind::kS1xCY3), 8u);
  EXPECT_EQ(model_holonomy_algebra_dim(ModelKind::kT3xK3), 3u);
}
