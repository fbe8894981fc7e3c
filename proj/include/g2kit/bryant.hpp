#pragma once

// Twisting a G2 structure inside its metric class:
//
//   φ̃ = (c² − |ω|²) φ + 2c ∗(ω∧φ) + 2 ω∧∗(ω∧∗φ),   c² + |ω|² = 1,
//
// together with the split of φ̃ into types, recovery of (c, ω) from φ̃, and
// the derivative of (c, ω) ↦ φ̃ along the constraint sphere.

#include <cmath>
#include <random>
#include <vector>

#include "g2kit/g2.hpp"

namespace g2kit {

/// Constraint tolerance for c² + |ω|² = 1 in float mode.
inline constexpr double kConstraintTol = 1e-12;
/// Largest acceptable max-norm residual of a float-mode recovery.
inline constexpr double kRecoveryTol = 1e-9;

/// A point (c, ω) of the unit sphere in R ⊕ Λ¹; (c, ω) and (−c, −ω) give the
/// same twisted form.
template <Scalar S>
struct TwistParams {
  S c = S(1);
  KForm<S> omega = KForm<S>(1);

  TwistParams() = default;
  TwistParams(S c_value, KForm<S> omega_value) : c(std::move(c_value)), omega(std::move(omega_value)) {
    if (omega.degree() != 1) throw Error(ErrorCode::kInvalidArgument, "twist parameter ω must be a 1-form");
  }

  TwistParams antipode() const { return {S(-c), -omega}; }
};

/// Velocity (ċ, ω̇) of a curve on the constraint sphere.
template <Scalar S>
struct TwistTangent {
  S cdot = S(0);
  KForm<S> omegadot = KForm<S>(1);
};

template <Scalar S>
S constraint_residual(const TwistParams<S>& p, const Metric<S>& m) {
  return p.c * p.c + norm_squared(p.omega, m) - S(1);
}

template <Scalar S>
void check_constraint(const TwistParams<S>& p, const Metric<S>& m) {
  S r = constraint_residual(p, m);
  if (!is_zero(r, kConstraintTol))
    throw Error(ErrorCode::kConstraintViolation,
                "c^2 + |omega|^2 - 1 = " + to_string(r) + " violates the twist constraint");
}

/// Canonical representative of the antipodal pair: c > 0, or when c = 0 the
/// first nonzero coefficient of ω is positive.
template <Scalar S>
TwistParams<S> canonical(const TwistParams<S>& p, double tol = kDefaultTol) {
  int s = sign_of(p.c, tol);
  if (s == 0) {
    for (const auto& x : p.omega.coeffs()) {
      s = sign_of(x, tol);
      if (s != 0) break;
    }
  }
  TwistParams<S> out = s < 0 ? p.antipode() : p;
  if constexpr (!is_exact_v<S>) {
    if (is_zero(out.c, tol)) out.c = 0.0;
  }
  return out;
}

template <Scalar S>
bool same_params(const TwistParams<S>& a, const TwistParams<S>& b, double tol = kDefaultTol) {
  return near(a.c, b.c, tol) && approx_equal(a.omega, b.omega, tol);
}

/// Equality modulo (c, ω) ~ (−c, −ω).
template <Scalar S>
bool antipodally_equal(const TwistParams<S>& a, const TwistParams<S>& b, double tol = kDefaultTol) {
  return same_params(a, b, tol) || same_params(a, b.antipode(), tol);
}

template <Scalar S>
KForm<S> twist(const G2Structure<S>& s, const TwistParams<S>& p) {
  check_constraint(p, s.metric());
  const KForm<S>& phi = s.phi();
  S w2 = norm_squared(p.omega, s.metric());
  KForm<S> out = phi * (p.c * p.c - w2);
  out += s.star(wedge(p.omega, phi)) * (S(2) * p.c);
  out += wedge(p.omega, s.star(wedge(p.omega, s.star_phi()))) * S(2);
  return out;
}

/// Types of the twisted form:
/// p1 = (8c² − 1)/7 φ, p7 = 2c ∗(ω∧φ), p27 = 2 π₂₇(ω∧∗(ω∧∗φ)).
template <Scalar S>
Decomposition3<S> twist_decomposed(const G2Structure<S>& s, const TwistParams<S>& p) {
  check_constraint(p, s.metric());
  const KForm<S>& phi = s.phi();
  KForm<S> quadratic = wedge(p.omega, s.star(wedge(p.omega, s.star_phi())));
  return {phi * ((S(8) * p.c * p.c - S(1)) / S(7)),
          s.star(wedge(p.omega, phi)) * (S(2) * p.c),
          decompose3(quadratic, s).p27 * S(2)};
}

template <Scalar S>
struct Recovery {
  TwistParams<S> params;  // canonical representative
  double residual = 0.0;  // max-norm of twist(s, params) − φ̃
};

namespace detail {

template <Scalar S>
Vec7<S> omega_from_omega37(const G2Structure<S>& s, const KForm<S>& target) {
  // ∗(ω∧φ) is linear in ω; solve it in the coordinate coframe.
  Matrix<S> l(35, kDim);
  for (int i = 1; i <= kDim; ++i) l.set_column(i - 1, s.star(wedge(KForm<S>::basis({i}), s.phi())).coeffs());
  auto x = solve(l, target.coeffs(), s.tol());
  Vec7<S> out;
  std::copy(x.begin(), x.end(), out.begin());
  return out;
}

}  // namespace detail

/// Recovers (c, ω) from a G2 form inducing the same metric and orientation.
template <Scalar S>
Recovery<S> recover_detailed(const G2Structure<S>& s, const KForm<S>& phit) {
  const double tol = s.tol();
  InducedMetric<S> induced = [&] {
    try {
      return metric_from_phi(phit, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNotG2Form || e.code() == ErrorCode::kInexact)
        throw Error(ErrorCode::kMetricMismatch, std::string("recover: ") + e.what());
      throw;
    }
  }();
  if (!approx_equal(induced.metric.matrix(), s.metric().matrix(), tol))
    throw Error(ErrorCode::kMetricMismatch, "recover: form induces a different metric");
  if (induced.orientation != s.orientation())
    throw Error(ErrorCode::kMetricMismatch, "recover: form induces the opposite orientation");

  Decomposition3<S> d = decompose3(phit, s);
  S a = s.inner(phit, s.phi()) / s.phi_norm_squared();
  S c2 = (S(7) * a + S(1)) / S(8);
  TwistParams<S> p;
  // Away from c = 0 the Λ³₇ part determines ω linearly. Near c = 0 (exactly
  // zero in exact mode) use the rank-one tensor instead:
  // φ̃ − π₇φ̃ = (2c² − 1)φ + 2(ω⊗ω)⊙φ.
  const double linear_threshold = is_exact_v<S> ? 0.0 : 1e-4;
  if (sign_of(c2, linear_threshold) > 0) {
    S c;
    try {
      c = sqrt_scalar(c2, "recover: c");
    } catch (const Error& e) {
      throw Error(ErrorCode::kNoSolution, e.what());
    }
    Vec7<S> w;
    try {
      w = detail::omega_from_omega37(s, d.p7 * (S(1) / (S(2) * c)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kNoSolution, std::string("recover: ") + e.what());
    }
    p = TwistParams<S>(c, KForm<S>(1, std::vector<S>(w.begin(), w.end())));
  } else {
    // c² itself is well conditioned here but sqrt(c²) is not, so c is read
    // off π₇φ̃ once ω is known.
    Matrix<S> m;
    try {
      KForm<S> rank_one_image = (phit - d.p7 - s.phi() * (S(2) * c2 - S(1))) * from_ratio<S>(1, 2);
      m = odot_inverse<S>(rank_one_image, s).b;
    } catch (const Error& e) {
      throw Error(ErrorCode::kNoSolution, std::string("recover: ") + e.what());
    }
    int pivot = -1;
    for (int j = 0; j < kDim; ++j) {
      if constexpr (is_exact_v<S>) {
        if (pivot < 0 && sgn(m(j, j)) != 0) pivot = j;
      } else {
        if (pivot < 0 || m(j, j) > m(pivot, pivot)) pivot = j;
      }
    }
    if (pivot < 0 || sign_of(m(pivot, pivot), tol) <= 0)
      throw Error(ErrorCode::kNoSolution, "recover: ω⊗ω is not positive semidefinite of rank one");
    S wj;
    try {
      wj = sqrt_scalar(m(pivot, pivot), "recover: ω component");
    } catch (const Error& e) {
      throw Error(ErrorCode::kNoSolution, e.what());
    }
    KForm<S> omega(1);
    for (int i = 0; i < kDim; ++i) omega.coeff(i) = m(i, pivot) / wj;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j)
        if (!near(S(omega.coeff(i) * omega.coeff(j)), m(i, j), std::sqrt(tol)))
          throw Error(ErrorCode::kNoSolution, "recover: ω⊗ω is not rank one");
    // π₇φ̃ = 2c ∗(ω∧φ)
    KForm<S> dir = s.star(wedge(omega, s.phi()));
    S c = s.inner(d.p7, dir) / (S(2) * s.inner(dir, dir));
    p = TwistParams<S>(c, std::move(omega));
  }
  if constexpr (!is_exact_v<S>) {
    double n = std::sqrt(p.c * p.c + norm_squared(p.omega, s.metric()));
    p.c /= n;
    p.omega *= 1.0 / n;
  }
  p = canonical(p, tol);
  double residual;
  try {
    residual = (twist(s, p) - phit).max_abs();
  } catch (const Error& e) {
    throw Error(ErrorCode::kNoSolution, std::string("recover: ") + e.what());
  }
  const double allowed = is_exact_v<S> ? 0.0 : kRecoveryTol;
  if (residual > allowed)
    throw Error(ErrorCode::kNoSolution, "recover: residual " + to_string(residual) + " exceeds tolerance");
  return {std::move(p), residual};
}

template <Scalar S>
TwistParams<S> recover(const G2Structure<S>& s, const KForm<S>& phit) {
  return recover_detailed(s, phit).params;
}

/// Derivative of the twist map at p in direction t:
/// 4cċ φ + 2ċ ∗(ω∧φ) + 2c ∗(ω̇∧φ) + 2 ω̇∧∗(ω∧∗φ) + 2 ω∧∗(ω̇∧∗φ).
template <Scalar S>
KForm<S> twist_derivative(const G2Structure<S>& s, const TwistParams<S>& p, const TwistTangent<S>& t) {
  check_constraint(p, s.metric());
  S tangency = p.c * t.cdot + s.inner(p.omega, t.omegadot);
  const double scale = std::max(1.0, std::max(abs_value(t.cdot), t.omegadot.max_abs()));
  if (!is_zero(tangency, kConstraintTol * scale))
    throw Error(ErrorCode::kConstraintViolation,
                "twist_derivative: tangent violates c*cdot + <omega, omegadot> = 0 (" + to_string(tangency) + ")");
  const KForm<S>& phi = s.phi();
  const KForm<S>& sphi = s.star_phi();
  KForm<S> out = phi * (S(4) * p.c * t.cdot);
  out += s.star(wedge(p.omega, phi)) * (S(2) * t.cdot);
  out += s.star(wedge(t.omegadot, phi)) * (S(2) * p.c);
  out += wedge(t.omegadot, s.star(wedge(p.omega, sphi))) * S(2);
  out += wedge(p.omega, s.star(wedge(t.omegadot, sphi))) * S(2);
  return out;
}

struct DerivativeRank {
  std::size_t rank = 0;
  std::size_t ambient_dim = 0;
  double sigma_max = 0.0;
  double margin = 0.0;  // ambient_dim-th largest singular value
};

/// Coordinate subspace span{dx1, ..., dxk}.
template <Scalar S>
std::vector<KForm<S>> coordinate_subspace(int k) {
  if (k < 0 || k > kDim) throw Error(ErrorCode::kInvalidArgument, "subspace dimension must lie in 0..7");
  std::vector<KForm<S>> basis;
  for (int i = 1; i <= k; ++i) basis.push_back(KForm<S>::basis({i}));
  return basis;
}

/// Rank of t ↦ twist_derivative(s, p, t) on the tangent space at p of the
/// sphere in R ⊕ span(subspace). Injective iff rank == subspace.size().
template <Scalar S>
DerivativeRank derivative_rank(const G2Structure<S>& s, const TwistParams<S>& p,
                               const std::vector<KForm<S>>& subspace) {
  check_constraint(p, s.metric());
  const Metric<S>& m = s.metric();
  const std::size_t b = subspace.size();
  // ω must lie in the subspace.
  if (b < static_cast<std::size_t>(kDim)) {
    KForm<S> rest = p.omega;
    if (b > 0) {
      Matrix<S> gram(b, b);
      std::vector<S> rhs(b);
      for (std::size_t i = 0; i < b; ++i) {
        rhs[i] = form_inner(subspace[i], p.omega, m);
        for (std::size_t j = 0; j < b; ++j) gram(i, j) = form_inner(subspace[i], subspace[j], m);
      }
      auto x = solve(gram, rhs, s.tol());
      for (std::size_t i = 0; i < b; ++i) rest -= subspace[i] * x[i];
    }
    if (!rest.is_zero(1e-9)) throw Error(ErrorCode::kNotInSubspace, "derivative_rank: ω is outside the subspace");
  }
  // Project the coordinate directions of R ⊕ W onto the tangent space.
  Matrix<S> images(35, b + 1);
  for (std::size_t j = 0; j <= b; ++j) {
    TwistTangent<S> t;
    S along = j == 0 ? p.c : form_inner(subspace[j - 1], p.omega, m);
    t.cdot = (j == 0 ? S(1) : S(0)) - along * p.c;
    t.omegadot = (j == 0 ? KForm<S>(1) : subspace[j - 1]) - p.omega * along;
    images.set_column(j, twist_derivative(s, p, t).coeffs());
  }
  DerivativeRank out;
  out.ambient_dim = b;
  out.rank = rank(images);
  Eigen::VectorXd sv = singular_values(to_eigen(images));
  if (sv.size() > 0) out.sigma_max = sv(0);
  if (b > 0 && static_cast<Eigen::Index>(b) <= sv.size()) out.margin = sv(b - 1);
  return out;
}

template <Scalar S>
DerivativeRank derivative_rank(const G2Structure<S>& s, const TwistParams<S>& p, int ambient_dim = kDim) {
  return derivative_rank(s, p, coordinate_subspace<S>(ambient_dim));
}

// --- sampling -------------------------------------------------------------------

/// Rational point on the unit sphere in R^dim via inverse stereographic
/// projection of a random rational vector.
template <Scalar S>
std::vector<S> rational_sphere_point(std::mt19937_64& rng, int dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "sphere dimension must be >= 1");
  std::uniform_int_distribution<long> num(-6, 6), den(1, 6);
  if (dim == 1) return {S(num(rng) < 0 ? -1 : 1)};
  std::vector<Rational> t(dim - 1);
  Rational t2(0);
  for (auto& x : t) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
    t2 += x * x;
  }
  std::vector<S> out(dim);
  Rational denom = 1 + t2;
  Rational first = (1 - t2) / denom;
  // Rotate which coordinate carries the "pole" so no coordinate is biased.
  std::uniform_int_distribution<int> which(0, dim - 1);
  int pole = which(rng);
  int k = 0;
  for (int i = 0; i < dim; ++i) {
    Rational v = i == pole ? first : Rational(2 * t[k++] / denom);
    if constexpr (is_exact_v<S>) {
      out[i] = v;
    } else {
      out[i] = v.get_d();
    }
  }
  return out;
}

/// Random rational twist parameters with ω in span{dx1..dxk}; when
/// `force_c_zero` is set, c = 0 and |ω| = 1.
template <Scalar S>
TwistParams<S> sample_twist_params(std::mt19937_64& rng, int k = kDim, bool force_c_zero = false) {
  if (k < 0 || k > kDim) throw Error(ErrorCode::kInvalidArgument, "subspace dimension must lie in 0..7");
  if (force_c_zero && k == 0) throw Error(ErrorCode::kInvalidArgument, "c = 0 needs a nonzero subspace");
  KForm<S> omega(1);
  if (force_c_zero) {
    auto x = rational_sphere_point<S>(rng, k);
    for (int i = 0; i < k; ++i) omega.coeff(i) = x[i];
    return {S(0), omega};
  }
  auto x = rational_sphere_point<S>(rng, k + 1);
  for (int i = 0; i < k; ++i) omega.coeff(i) = x[i + 1];
  return {x[0], omega};
}

}  // namespace g2kit
