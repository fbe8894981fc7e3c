#pragma once

// G2 structures on R^7: the standard 3-form, metric recovery, type
// decompositions of 2- and 3-forms, and the ⊙ map.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "g2kit/exterior.hpp"
#include "g2kit/linalg.hpp"

namespace g2kit {

/// φ₀ = dx123 + dx145 + dx167 + dx246 − dx257 − dx347 − dx356.
template <Scalar S>
KForm<S> phi0() {
  KForm<S> phi(3);
  phi[{1, 2, 3}] = S(1);
  phi[{1, 4, 5}] = S(1);
  phi[{1, 6, 7}] = S(1);
  phi[{2, 4, 6}] = S(1);
  phi[{2, 5, 7}] = S(-1);
  phi[{3, 4, 7}] = S(-1);
  phi[{3, 5, 6}] = S(-1);
  return phi;
}

template <Scalar S>
struct InducedMetric {
  Metric<S> metric;
  Orientation orientation;
};

/// B_ij defined by (e_i⌟φ)∧(e_j⌟φ)∧φ = B_ij dx1...7.
template <Scalar S>
Matrix<S> g2_bilinear_form(const KForm<S>& phi) {
  if (phi.degree() != 3) throw Error(ErrorCode::kInvalidArgument, "expected a 3-form");
  std::vector<KForm<S>> contracted;
  for (int i = 1; i <= kDim; ++i) contracted.push_back(interior(unit_vec<S>(i), phi));
  Matrix<S> b(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) {
      S v = wedge(wedge(contracted[i], contracted[j]), phi).coeff(0);
      b(i, j) = v;
      b(j, i) = v;
    }
  return b;
}

/// Metric and orientation induced by a G2 3-form.
///
/// With B as above, g = B / (6^{2/9} det(B)^{1/9}); if det B < 0 the form
/// is positive for the opposite orientation and B is negated first. Exact
/// mode succeeds only when det(B)/6^7 is the ninth power of a rational.
template <Scalar S>
InducedMetric<S> metric_from_phi(const KForm<S>& phi, double tol = kDefaultTol) {
  Matrix<S> b = g2_bilinear_form(phi);
  S det = determinant(b);
  Orientation orientation = Orientation::kPositive;
  if (is_zero(det, 0.0) || (!is_exact_v<S> && abs_value(det) <= tol))
    throw Error(ErrorCode::kNotG2Form, "not a G2 form: degenerate bilinear form");
  if (sign_of(det) < 0) {
    b = -b;
    det = -det;  // odd dimension
    orientation = Orientation::kNegative;
  }
  const S six_pow7 = S(279936);  // 6^7
  S scale;
  if constexpr (is_exact_v<S>) {
    auto root = exact_root(Rational(det / six_pow7), 9);
    if (!root)
      throw Error(ErrorCode::kInexact,
                  "metric_from_phi: det(B)/6^7 = " + Rational(det / six_pow7).get_str() +
                      " has no rational ninth root; use float mode");
    scale = S(6) * *root;
  } else {
    scale = 6.0 * std::pow(det / six_pow7, 1.0 / 9.0);
  }
  Matrix<S> g = b * (S(1) / scale);
  try {
    return {Metric<S>(std::move(g), tol), orientation};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotPositiveDefinite)
      throw Error(ErrorCode::kNotG2Form, "not a G2 form: bilinear form is indefinite");
    throw;
  }
}

template <Scalar S>
bool is_g2_form(const KForm<S>& phi, double tol = kDefaultTol) {
  try {
    metric_from_phi(phi, tol);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotG2Form) return false;
    throw;
  }
}

/// Antisymmetric 7x7 matrix with entries β_ij of a 2-form.
template <Scalar S>
Matrix<S> two_form_to_matrix(const KForm<S>& beta) {
  if (beta.degree() != 2) throw Error(ErrorCode::kInvalidArgument, "expected a 2-form");
  Matrix<S> m(kDim, kDim);
  for (std::size_t p = 0; p < beta.size(); ++p) {
    auto idx = beta.index_at(p).indices();
    m(idx[0] - 1, idx[1] - 1) = beta.coeff(p);
    m(idx[1] - 1, idx[0] - 1) = -beta.coeff(p);
  }
  return m;
}

template <Scalar S>
KForm<S> matrix_to_two_form(const Matrix<S>& m) {
  KForm<S> beta(2);
  for (std::size_t p = 0; p < beta.size(); ++p) {
    auto idx = beta.index_at(p).indices();
    beta.coeff(p) = m(idx[0] - 1, idx[1] - 1);
  }
  return beta;
}

/// Symmetric bilinear form; `traceless` records a zero metric trace.
template <Scalar S>
struct SymTensor {
  Matrix<S> b;
  bool traceless = false;
};

template <Scalar S>
struct Decomposition2 {
  KForm<S> p7;
  KForm<S> p14;
};

template <Scalar S>
struct Decomposition3 {
  KForm<S> p1;
  KForm<S> p7;
  KForm<S> p27;
};

namespace detail {

// Continued-fraction rounding, used to lift float eigenvalues to exact
// candidates that are then verified by exact rank computations.
inline Rational rationalize(double x, long max_den = 1000) {
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 40; ++iter) {
    double a = std::floor(r);
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double frac = r - a;
    if (std::abs(frac) < 1e-12) break;
    r = 1.0 / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

}  // namespace detail

/// A G2 3-form bundled with its induced metric, orientation, volume form and
/// the operators the type decompositions need. Everything is computed in the
/// constructor; instances are immutable.
template <Scalar S>
class G2Structure {
 public:
  explicit G2Structure(KForm<S> phi, double tol = kDefaultTol) : phi_(std::move(phi)), tol_(tol) {
    auto induced = metric_from_phi(phi_, tol);
    metric_ = std::move(induced.metric);
    orientation_ = induced.orientation;
    vol_ = volume_form(metric_, orientation_);
    star_phi_ = hodge_star(phi_, metric_, orientation_);
    phi_norm2_ = form_inner(phi_, phi_, metric_);
    build_two_form_operator();
    build_omega37();
    build_odot_symmetric();
  }

  const KForm<S>& phi() const { return phi_; }
  const KForm<S>& star_phi() const { return star_phi_; }
  const Metric<S>& metric() const { return metric_; }
  Orientation orientation() const { return orientation_; }
  const KForm<S>& vol() const { return vol_; }
  const S& lambda7() const { return lambda7_; }
  const S& lambda14() const { return lambda14_; }
  const S& phi_norm_squared() const { return phi_norm2_; }
  double tol() const { return tol_; }

  KForm<S> star(const KForm<S>& a) const { return hodge_star(a, metric_, orientation_); }
  S inner(const KForm<S>& a, const KForm<S>& b) const { return form_inner(a, b, metric_); }

  /// β ↦ ∗(φ∧β) on Λ² as a 21x21 matrix in the lexicographic basis.
  const Matrix<S>& two_form_operator() const { return t2_; }

  /// Basis of Λ²₇ (the λ₇-eigenspace), one 2-form per column.
  const Matrix<S>& omega27_basis() const { return basis27_; }
  /// Basis of Λ²₁₄ (the λ₁₄-eigenspace).
  const Matrix<S>& omega214_basis() const { return basis214_; }

  /// e_i⌟∗φ, i = 1..7; spans Λ³₇.
  const std::vector<KForm<S>>& omega37_spanning() const { return chi_; }

  /// 35x28 matrix whose columns are ⊙-images of the symmetric basis
  /// E_aa, E_ab + E_ba (a < b).
  const Matrix<S>& odot_symmetric_images() const { return odot_sym_; }

  std::vector<S> omega37_coordinates(const KForm<S>& eta) const {
    std::vector<S> rhs(kDim);
    for (int i = 0; i < kDim; ++i) rhs[i] = inner(chi_[i], eta);
    return chi_gram_inv_ * rhs;
  }

 private:
  void build_two_form_operator() {
    t2_ = Matrix<S>(21, 21);
    for (std::size_t j = 0; j < 21; ++j) {
      KForm<S> beta(2);
      beta.coeff(j) = S(1);
      t2_.set_column(j, star(wedge(phi_, beta)).coeffs());
    }
    // Eigenvalues from a dense float solve, clustered, then (exact mode)
    // lifted to rationals and confirmed by exact ranks.
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(t2_), false);
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
    std::sort(ev.begin(), ev.end());
    std::vector<std::vector<double>> clusters;
    for (double x : ev) {
      if (clusters.empty() || std::abs(x - clusters.back().back()) > 1e-6 * std::max(1.0, std::abs(x)))
        clusters.push_back({x});
      else
        clusters.back().push_back(x);
    }
    if (clusters.size() != 2)
      throw Error(ErrorCode::kNotG2Form, "β ↦ ∗(φ∧β) has " + std::to_string(clusters.size()) +
                                             " distinct eigenvalues, expected 2");
    std::array<S, 2> values;
    std::array<Matrix<S>, 2> spaces;
    for (int c = 0; c < 2; ++c) {
      double mean = 0.0;
      for (double x : clusters[c]) mean += x;
      mean /= static_cast<double>(clusters[c].size());
      if constexpr (is_exact_v<S>) {
        values[c] = detail::rationalize(mean);
      } else {
        values[c] = mean;
      }
      Matrix<S> shifted = t2_ - Matrix<S>::identity(21) * values[c];
      spaces[c] = nullspace(shifted, 1e-6);
      if (spaces[c].cols() != clusters[c].size())
        throw Error(ErrorCode::kNotG2Form, "eigenspace dimension does not match multiplicity");
    }
    int i7 = spaces[0].cols() == 7 ? 0 : 1;
    if (spaces[i7].cols() != 7 || spaces[1 - i7].cols() != 14)
      throw Error(ErrorCode::kNotG2Form, "eigenspace dimensions are not {7, 14}");
    lambda7_ = values[i7];
    lambda14_ = values[1 - i7];
    basis27_ = spaces[i7];
    basis214_ = spaces[1 - i7];
  }

  void build_omega37() {
    Matrix<S> gram(kDim, kDim);
    for (int i = 1; i <= kDim; ++i) chi_.push_back(interior(unit_vec<S>(i), star_phi_));
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) gram(i, j) = inner(chi_[i], chi_[j]);
    chi_gram_inv_ = inverse(gram);
  }

  void build_odot_symmetric() {
    odot_sym_ = Matrix<S>(35, 28);
    const Matrix<S>& ginv = metric_.inverse_matrix();
    std::size_t col = 0;
    for (int a = 0; a < kDim; ++a)
      for (int b = a; b < kDim; ++b) {
        Matrix<S> e(kDim, kDim);
        e(a, b) = S(1);
        e(b, a) = S(1);
        odot_sym_.set_column(col++, derivation(ginv * e, phi_).coeffs());
      }
  }

  KForm<S> phi_;
  double tol_;
  Metric<S> metric_;
  Orientation orientation_ = Orientation::kPositive;
  KForm<S> vol_;
  KForm<S> star_phi_;
  S phi_norm2_;
  Matrix<S> t2_;
  S lambda7_, lambda14_;
  Matrix<S> basis27_, basis214_;
  std::vector<KForm<S>> chi_;
  Matrix<S> chi_gram_inv_;
  Matrix<S> odot_sym_;
};

template <Scalar S>
G2Structure<S> standard_structure(double tol = kDefaultTol) {
  return G2Structure<S>(phi0<S>(), tol);
}

/// Spectral split Λ² = Λ²₇ ⊕ Λ²₁₄.
template <Scalar S>
Decomposition2<S> decompose2(const KForm<S>& beta, const G2Structure<S>& s) {
  if (beta.degree() != 2) throw Error(ErrorCode::kInvalidArgument, "decompose2 needs a 2-form");
  KForm<S> t_beta = s.star(wedge(s.phi(), beta));
  KForm<S> p7 = (t_beta - beta * s.lambda14()) * (S(1) / (s.lambda7() - s.lambda14()));
  KForm<S> p14 = beta - p7;
  return {std::move(p7), std::move(p14)};
}

/// Λ³ = Λ³₁ ⊕ Λ³₇ ⊕ Λ³₂₇ by orthogonal projection.
template <Scalar S>
Decomposition3<S> decompose3(const KForm<S>& eta, const G2Structure<S>& s) {
  if (eta.degree() != 3) throw Error(ErrorCode::kInvalidArgument, "decompose3 needs a 3-form");
  KForm<S> p1 = s.phi() * (s.inner(eta, s.phi()) / s.phi_norm_squared());
  std::vector<S> x = s.omega37_coordinates(eta);
  KForm<S> p7(3);
  for (int i = 0; i < kDim; ++i) p7 += s.omega37_spanning()[i] * x[i];
  KForm<S> p27 = eta - p1 - p7;
  return {std::move(p1), std::move(p7), std::move(p27)};
}

/// (b⊙φ)(u,v,w) = φ(b̂u,v,w) + φ(u,b̂v,w) + φ(u,v,b̂w), with b̂ the metric
/// dual endomorphism: g(b̂u, w) = b(u, w). b need not be symmetric.
template <Scalar S>
KForm<S> odot(const Matrix<S>& b, const G2Structure<S>& s) {
  return derivation(s.metric().inverse_matrix() * b.transpose(), s.phi());
}

/// ⊙ applied to an endomorphism directly (b̂ given).
template <Scalar S>
KForm<S> odot_endomorphism(const Matrix<S>& bhat, const G2Structure<S>& s) {
  return derivation(bhat, s.phi());
}

/// Frame formula b⊙φ = b_ij ω_i∧(e_j⌟φ) with b_ij = b(e_i, e_j), evaluated in
/// an s-orthonormal frame (columns of `frame`).
template <Scalar S>
KForm<S> odot_local(const Matrix<S>& b, const G2Structure<S>& s, const Matrix<S>& frame) {
  const double tol = s.tol();
  if (!approx_equal(frame.transpose() * s.metric().matrix() * frame, Matrix<S>::identity(kDim), tol))
    throw Error(ErrorCode::kInvalidArgument, "odot_local: frame is not orthonormal for the structure's metric");
  std::vector<Vec7<S>> e(kDim);
  for (int j = 0; j < kDim; ++j)
    for (int i = 0; i < kDim; ++i) e[j][i] = frame(i, j);
  Matrix<S> bij = frame.transpose() * b * frame;
  KForm<S> out(3);
  for (int j = 0; j < kDim; ++j) {
    KForm<S> contracted = interior(e[j], s.phi());
    for (int i = 0; i < kDim; ++i) {
      if (is_zero(bij(i, j), 0.0)) continue;
      out += wedge(flat(e[i], s.metric()), contracted) * bij(i, j);
    }
  }
  return out;
}

template <Scalar S>
KForm<S> odot_local(const Matrix<S>& b, const G2Structure<S>& s) {
  if (!s.metric().is_euclidean())
    throw Error(ErrorCode::kInvalidArgument,
                "odot_local: non-Euclidean metric requires an explicit orthonormal frame");
  return odot_local(b, s, Matrix<S>::identity(kDim));
}

template <Scalar S>
KForm<S> odot_local(const SymTensor<S>& b, const G2Structure<S>& s) {
  return odot_local(b.b, s);
}

/// Inverse of ⊙ on symmetric tensors: the unique symmetric b with
/// b⊙φ = eta, for eta without a Λ³₇ component.
template <Scalar S>
SymTensor<S> odot_inverse(const KForm<S>& eta, const G2Structure<S>& s) {
  const double tol = s.tol();
  Decomposition3<S> d = decompose3(eta, s);
  if (!d.p7.is_zero(tol))
    throw Error(ErrorCode::kInvalidArgument, "odot_inverse: input has a nonzero Λ³₇ component");
  // g⊙φ = 3φ fixes the trace part.
  S t = s.inner(d.p1, s.phi()) / s.phi_norm_squared();
  Matrix<S> b = s.metric().matrix() * (t / S(3));
  std::vector<S> x = solve(s.odot_symmetric_images(), d.p27.coeffs(), tol);
  std::size_t col = 0;
  for (int a = 0; a < kDim; ++a)
    for (int c = a; c < kDim; ++c) {
      b(a, c) += x[col];
      if (a != c) b(c, a) += x[col];
      ++col;
    }
  return {std::move(b), is_zero(t, tol)};
}

/// d/dt of the frame action of exp(tA) on φ at t = 0, i.e. (−A)⊙φ with A
/// acting as an endomorphism.
template <Scalar S>
KForm<S> infinitesimal_action(const Matrix<S>& a, const G2Structure<S>& s) {
  return derivation(-a, s.phi());
}

}  // namespace g2kit
