#pragma once

// Flat models of G2 manifolds with reduced holonomy, taken pointwise:
//
//   T7      φ₀ on the flat torus, holonomy {1}, b¹ = 7
//   S1xCY3  dθ∧ω + Re Ω on S¹ × (flat) CY3, holonomy SU(3), b¹ = 1
//   T3xK3   dx123 + dx1∧ω + dx2∧Re Ω − dx3∧Im Ω on T³ × (flat) K3, SU(2), b¹ = 3
//
// Harmonic 1-forms on these models are the constant-coefficient forms in
// the torus directions, so the parameter space Γ of torsion-free structures
// with the model metric is the sphere in R ⊕ span{dx1..dx_b¹} mod ±1.

#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "g2kit/bryant.hpp"
#include "g2kit/lie.hpp"

namespace g2kit {

enum class ModelKind { kT7, kS1xCY3, kT3xK3 };

inline std::string_view model_tag(ModelKind k) {
  switch (k) {
    case ModelKind::kT7: return "t7";
    case ModelKind::kS1xCY3: return "s1xcy3";
    case ModelKind::kT3xK3: return "t3xk3";
  }
  return "?";
}

inline ModelKind parse_model(std::string_view tag) {
  if (tag == "t7") return ModelKind::kT7;
  if (tag == "s1xcy3") return ModelKind::kS1xCY3;
  if (tag == "t3xk3") return ModelKind::kT3xK3;
  throw Error(ErrorCode::kUnsupportedModel, "unknown model \"" + std::string(tag) + "\" (expected t7|s1xcy3|t3xk3)");
}

template <Scalar S>
struct FlatModel {
  ModelKind kind;
  int b1;
  std::vector<KForm<S>> omega_subspace;
  std::string holonomy;  // label only

  static FlatModel make(ModelKind kind) {
    switch (kind) {
      case ModelKind::kT7: return {kind, 7, coordinate_subspace<S>(7), "{1}"};
      case ModelKind::kS1xCY3: return {kind, 1, coordinate_subspace<S>(1), "SU(3)"};
      case ModelKind::kT3xK3: return {kind, 3, coordinate_subspace<S>(3), "SU(2)"};
    }
    throw Error(ErrorCode::kUnsupportedModel, "unknown model");
  }
};

/// Re + i Im of a complex-valued form.
template <Scalar S>
struct ComplexForm {
  KForm<S> re;
  KForm<S> im;
};

template <Scalar S>
ComplexForm<S> wedge(const ComplexForm<S>& a, const ComplexForm<S>& b) {
  return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
}

/// dz = dx_re + i dx_im.
template <Scalar S>
ComplexForm<S> complex_coordinate(int re, int im) {
  return {KForm<S>::basis({re}), KForm<S>::basis({im})};
}

/// Builds the model's 3-form from its factor data (Kähler form ω and
/// holomorphic volume form Ω of flat C³ or C²) and returns the structure.
template <Scalar S>
KForm<S> model_form(ModelKind kind) {
  using F = KForm<S>;
  switch (kind) {
    case ModelKind::kT7:
      return phi0<S>();
    case ModelKind::kS1xCY3: {
      // θ = x1, z_k = x_{2k} + i x_{2k+1}
      F kahler = F::basis({2, 3}) + F::basis({4, 5}) + F::basis({6, 7});
      auto omega = wedge(wedge(complex_coordinate<S>(2, 3), complex_coordinate<S>(4, 5)), complex_coordinate<S>(6, 7));
      return wedge(F::basis({1}), kahler) + omega.re;
    }
    case ModelKind::kT3xK3: {
      // torus x1..x3, z1 = x4 + i x5, z2 = x6 + i x7
      F kahler = F::basis({4, 5}) + F::basis({6, 7});
      auto omega = wedge(complex_coordinate<S>(4, 5), complex_coordinate<S>(6, 7));
      return F::basis({1, 2, 3}) + wedge(F::basis({1}), kahler) + wedge(F::basis({2}), omega.re) -
             wedge(F::basis({3}), omega.im);
    }
  }
  throw Error(ErrorCode::kUnsupportedModel, "unknown model");
}

template <Scalar S>
G2Structure<S> model_phi(const FlatModel<S>& m, double tol = kDefaultTol) {
  return G2Structure<S>(model_form<S>(m.kind), tol);
}

/// A point of Γ for a model: canonical twist parameters with ω in the
/// model's harmonic subspace.
template <Scalar S>
struct GammaPoint {
  ModelKind model;
  TwistParams<S> params;
};

template <Scalar S>
GammaPoint<S> gamma_sample(const FlatModel<S>& m, std::uint64_t seed, bool force_c_zero = false) {
  std::mt19937_64 rng(seed);
  return {m.kind, canonical(sample_twist_params<S>(rng, m.b1, force_c_zero))};
}

/// Norm of the component of ω orthogonal to span(subspace).
template <Scalar S>
double distance_to_subspace(const KForm<S>& omega, const std::vector<KForm<S>>& subspace, const Metric<S>& m) {
  KForm<S> rest = omega;
  if (!subspace.empty()) {
    const std::size_t b = subspace.size();
    Matrix<S> gram(b, b);
    std::vector<S> rhs(b);
    for (std::size_t i = 0; i < b; ++i) {
      rhs[i] = form_inner(subspace[i], omega, m);
      for (std::size_t j = 0; j < b; ++j) gram(i, j) = form_inner(subspace[i], subspace[j], m);
    }
    auto x = solve(gram, rhs);
    for (std::size_t i = 0; i < b; ++i) rest -= subspace[i] * x[i];
  }
  return std::sqrt(to_double(norm_squared(rest, m)));
}

inline constexpr double kSubspaceTol = 1e-9;

/// Identifies φ̃ as a point of the model's Γ, given the model structure s.
/// Throws kNoSolution / kMetricMismatch when φ̃ is not a twist of the model
/// form, and kNotInSubspace when ω leaves the harmonic directions.
template <Scalar S>
GammaPoint<S> gamma_membership(const FlatModel<S>& m, const G2Structure<S>& s, const KForm<S>& phit) {
  TwistParams<S> p = recover(s, phit);
  double off = distance_to_subspace(p.omega, m.omega_subspace, s.metric());
  if (off > kSubspaceTol)
    throw Error(ErrorCode::kNotInSubspace, "gamma_membership: ω leaves the model's harmonic subspace (distance " +
                                               to_string(off) + ")");
  return {m.kind, p};
}

template <Scalar S>
GammaPoint<S> gamma_membership(const FlatModel<S>& m, const KForm<S>& phit, double tol = kDefaultTol) {
  return gamma_membership(m, model_phi(m, tol), phit);
}

/// Pullback of the twisted structure by the translation x ↦ x + t of the flat
/// torus. Constant-coefficient forms are invariant, so the differential of
/// the translation (the identity) is applied and Γ membership re-run.
template <Scalar S>
GammaPoint<S> translation_action(const FlatModel<S>& m, const G2Structure<S>& s, const Vec7<S>& /*t*/,
                                 const GammaPoint<S>& p) {
  if (m.kind != ModelKind::kT7)
    throw Error(ErrorCode::kUnsupportedModel, "translation_action is only defined for the t7 model");
  KForm<S> moved = pullback(twist(s, p.params), Matrix<S>::identity(kDim));
  return gamma_membership(m, s, moved);
}

template <Scalar S>
GammaPoint<S> translation_action(const FlatModel<S>& m, const Vec7<S>& t, const GammaPoint<S>& p) {
  if (m.kind != ModelKind::kT7)
    throw Error(ErrorCode::kUnsupportedModel, "translation_action is only defined for the t7 model");
  return translation_action(m, model_phi(m), t, p);
}

/// Number of distinct Γ points reached from p by the given translations;
/// in the trivial case this is the covering sheet count over the moduli image.
template <Scalar S>
std::size_t translation_orbit_size(const FlatModel<S>& m, const GammaPoint<S>& p, const std::vector<Vec7<S>>& translations,
                                   double tol = kDefaultTol) {
  if (m.kind != ModelKind::kT7)
    throw Error(ErrorCode::kUnsupportedModel, "translation_action is only defined for the t7 model");
  G2Structure<S> s = model_phi(m, tol);
  std::vector<TwistParams<S>> orbit{p.params};
  for (const auto& t : translations) {
    auto q = translation_action(m, s, t, p);
    bool seen = false;
    for (const auto& o : orbit)
      if (antipodally_equal(o, q.params, tol)) seen = true;
    if (!seen) orbit.push_back(q.params);
  }
  return orbit.size();
}

/// Holonomy generator samples inside the model's holonomy group, for the
/// N_f computations. Float mode (uses matrix exponentials).
inline HolonomySpec<double> model_holonomy_samples(ModelKind kind, std::mt19937_64& rng, int count = 3) {
  if (kind == ModelKind::kT7) return HolonomySpec<double>::trivial();
  // Elements of g2 that annihilate the torus directions generate the
  // holonomy subgroup (SU(3) fixes e1; SU(2) fixes e1, e2, e3).
  const int fixed = kind == ModelKind::kS1xCY3 ? 1 : 3;
  auto s = standard_structure<double>();
  auto g2 = g2_algebra_basis(s);
  Matrix<double> constraints(fixed * kDim, g2.dim());
  for (std::size_t k = 0; k < g2.dim(); ++k)
    for (int i = 0; i < fixed; ++i)
      for (int r = 0; r < kDim; ++r) constraints(i * kDim + r, k) = g2[k](r, i);
  Matrix<double> coeffs = nullspace(constraints);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix<double>> gens;
  for (int n = 0; n < count; ++n) {
    Matrix<double> a(kDim, kDim);
    for (std::size_t c = 0; c < coeffs.cols(); ++c) {
      double w = normal(rng);
      for (std::size_t k = 0; k < g2.dim(); ++k) a += g2[k] * (w * coeffs(k, c));
    }
    gens.push_back(expm(a));
  }
  return HolonomySpec<double>(std::move(gens), 1e-9);
}

/// Dimension of the holonomy algebra for the model (8 for su(3), 3 for su(2)).
inline std::size_t model_holonomy_algebra_dim(ModelKind kind) {
  if (kind == ModelKind::kT7) return 0;
  const int fixed = kind == ModelKind::kS1xCY3 ? 1 : 3;
  auto s = standard_structure<Rational>();
  auto g2 = g2_algebra_basis(s);
  Matrix<Rational> constraints(fixed * kDim, g2.dim());
  for (std::size_t k = 0; k < g2.dim(); ++k)
    for (int i = 0; i < fixed; ++i)
      for (int r = 0; r < kDim; ++r) constraints(i * kDim + r, k) = g2[k](r, i);
  return nullspace(constraints).cols();
}

}  // namespace g2kit
