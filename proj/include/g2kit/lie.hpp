#pragma once

// G2 inside SO(7): membership tests, the Lie algebra g2 ≅ Λ²₁₄, Lie-algebra
// normalizers, and the conjugation predicate describing N_f for a holonomy
// group given by finitely many generators.

#include <cmath>
#include <random>
#include <vector>

#include "g2kit/g2.hpp"

namespace g2kit {

template <Scalar S>
using Matrix7 = Matrix<S>;

template <Scalar S>
bool is_so7(const Matrix<S>& g, double tol = kDefaultTol) {
  if (g.rows() != kDim || g.cols() != kDim) return false;
  if (!approx_equal(g.transpose() * g, Matrix<S>::identity(kDim), tol)) return false;
  return near(determinant(g), S(1), tol);
}

/// Left action on forms: (g·a)(u, v, w) = a(g⁻¹u, g⁻¹v, g⁻¹w).
template <Scalar S>
KForm<S> act(const Matrix<S>& g, const KForm<S>& a) {
  return pullback(a, inverse(g));
}

/// g ∈ SO(7) fixing φ (φ₀ by default).
template <Scalar S>
bool is_g2(const Matrix<S>& g, const KForm<S>& phi, double tol = kDefaultTol) {
  if (!is_so7(g, tol)) return false;
  return approx_equal(act(g, phi), phi, tol);
}

template <Scalar S>
bool is_g2(const Matrix<S>& g, double tol = kDefaultTol) {
  return is_g2(g, phi0<S>(), tol);
}

/// Matrix exponential by scaling and squaring with a diagonal [8/8] Padé
/// approximant. Float mode only.
template <Scalar S>
Matrix<S> expm(const Matrix<S>& a) {
  if constexpr (is_exact_v<S>) {
    throw Error(ErrorCode::kInexact, "matrix exponential is not available in exact mode");
  } else {
    const std::size_t n = a.rows();
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < n; ++c) row += std::abs(a(r, c));
      norm = std::max(norm, row);
    }
    int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    Matrix<double> x = a * std::ldexp(1.0, -squarings);
    constexpr int q = 8;
    Matrix<double> num = Matrix<double>::identity(n), den = Matrix<double>::identity(n);
    Matrix<double> power = Matrix<double>::identity(n);
    double coeff = 1.0;
    for (int k = 1; k <= q; ++k) {
      coeff *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
      power = power * x;
      num += power * coeff;
      den += power * ((k % 2 == 0 ? 1.0 : -1.0) * coeff);
    }
    Matrix<double> result = inverse(den, 0.0) * num;
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
  }
}

/// The 21 elementary antisymmetric matrices E_ij − E_ji, i < j.
template <Scalar S>
std::vector<Matrix<S>> so7_basis() {
  std::vector<Matrix<S>> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      Matrix<S> m(kDim, kDim);
      m(i, j) = S(1);
      m(j, i) = S(-1);
      out.push_back(std::move(m));
    }
  return out;
}

namespace detail {

// Rows are the flattened matrices.
template <Scalar S>
Matrix<S> flatten_rows(const std::vector<Matrix<S>>& mats) {
  Matrix<S> m(mats.size(), kDim * kDim);
  for (std::size_t r = 0; r < mats.size(); ++r)
    for (std::size_t i = 0; i < static_cast<std::size_t>(kDim * kDim); ++i) m(r, i) = mats[r].data()[i];
  return m;
}

template <Scalar S>
Matrix<S> unflatten(const std::vector<S>& v) {
  Matrix<S> m(kDim, kDim);
  for (std::size_t i = 0; i < static_cast<std::size_t>(kDim * kDim); ++i) m(i / kDim, i % kDim) = v[i];
  return m;
}

// Basis (as rows) of the Frobenius-orthogonal complement of span(mats).
template <Scalar S>
std::vector<Matrix<S>> annihilator(const std::vector<Matrix<S>>& mats) {
  Matrix<S> ns = mats.empty() ? Matrix<S>::identity(kDim * kDim) : nullspace(flatten_rows(mats));
  std::vector<Matrix<S>> out;
  for (std::size_t c = 0; c < ns.cols(); ++c) out.push_back(unflatten(ns.column(c)));
  return out;
}

}  // namespace detail

template <Scalar S>
std::size_t span_dimension(const std::vector<Matrix<S>>& mats) {
  if (mats.empty()) return 0;
  return rank(detail::flatten_rows(mats));
}

template <Scalar S>
bool in_span(const Matrix<S>& x, const std::vector<Matrix<S>>& mats) {
  auto augmented = mats;
  augmented.push_back(x);
  return span_dimension(augmented) == span_dimension(mats);
}

template <Scalar S>
bool bracket_closed(const std::vector<Matrix<S>>& basis) {
  auto complement = detail::annihilator(basis);
  const double tol = is_exact_v<S> ? 0.0 : 1e-8;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      Matrix<S> br = commutator(basis[a], basis[b]);
      double scale = std::max(1.0, max_abs(br));
      for (const auto& y : complement)
        if (!is_zero(frobenius(y, br), tol * scale)) return false;
    }
  return true;
}

/// Linearly independent antisymmetric matrices spanning a subspace of so(7).
template <Scalar S>
class SubalgebraBasis {
 public:
  SubalgebraBasis() = default;
  explicit SubalgebraBasis(std::vector<Matrix<S>> basis, double tol = kDefaultTol) : basis_(std::move(basis)) {
    for (const auto& m : basis_) {
      if (m.rows() != kDim || m.cols() != kDim) throw Error(ErrorCode::kInvalidArgument, "basis matrices must be 7x7");
      if (!approx_equal(m.transpose(), -m, tol))
        throw Error(ErrorCode::kInvalidArgument, "basis matrices must be antisymmetric");
    }
    if (span_dimension(basis_) != basis_.size())
      throw Error(ErrorCode::kInvalidArgument, "basis matrices are linearly dependent");
  }

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Matrix<S>>& matrices() const { return basis_; }
  const Matrix<S>& operator[](std::size_t i) const { return basis_[i]; }

 private:
  std::vector<Matrix<S>> basis_;
};

template <Scalar S>
SubalgebraBasis<S> so7_algebra() {
  return SubalgebraBasis<S>(so7_basis<S>());
}

/// g2 as the metric duals of a basis of Λ²₁₄.
template <Scalar S>
SubalgebraBasis<S> g2_algebra_basis(const G2Structure<S>& s) {
  // Non-Euclidean metrics give g-antisymmetric rather than antisymmetric
  // matrices; only the Euclidean case is a subalgebra of the standard so(7).
  if (!s.metric().is_euclidean())
    throw Error(ErrorCode::kInvalidArgument, "g2_algebra_basis: structure metric must be Euclidean");
  const Matrix<S>& b = s.omega214_basis();
  std::vector<Matrix<S>> out;
  for (std::size_t c = 0; c < b.cols(); ++c) out.push_back(two_form_to_matrix(KForm<S>(2, b.column(c))));
  return SubalgebraBasis<S>(std::move(out), s.tol());
}

/// {A ∈ span(ambient) : [A, H] ∈ span(sub) for every H in sub}.
template <Scalar S>
SubalgebraBasis<S> lie_normalizer(const SubalgebraBasis<S>& ambient, const SubalgebraBasis<S>& sub) {
  for (const auto& h : sub.matrices())
    if (!in_span(h, ambient.matrices()))
      throw Error(ErrorCode::kNotSubalgebra, "lie_normalizer: sub is not contained in the ambient span");
  if (!bracket_closed(sub.matrices()))
    throw Error(ErrorCode::kNotSubalgebra, "lie_normalizer: sub is not closed under the bracket");
  auto complement = detail::annihilator(sub.matrices());
  const std::size_t m = ambient.dim();
  Matrix<S> system(complement.size() * sub.dim(), m);
  std::size_t row = 0;
  for (const auto& h : sub.matrices())
    for (const auto& y : complement) {
      for (std::size_t k = 0; k < m; ++k) system(row, k) = frobenius(y, commutator(ambient[k], h));
      ++row;
    }
  Matrix<S> ns = nullspace(system);
  std::vector<Matrix<S>> out;
  for (std::size_t c = 0; c < ns.cols(); ++c) {
    Matrix<S> a(kDim, kDim);
    for (std::size_t k = 0; k < m; ++k) a += ambient[k] * ns(k, c);
    out.push_back(std::move(a));
  }
  return SubalgebraBasis<S>(std::move(out), 1e-8);
}

/// Finite generating set standing in for a holonomy group; empty means {1}.
template <Scalar S>
class HolonomySpec {
 public:
  HolonomySpec() = default;
  explicit HolonomySpec(std::vector<Matrix<S>> generators, double tol = kDefaultTol)
      : generators_(std::move(generators)) {
    for (const auto& g : generators_)
      if (!is_so7(g, tol)) throw Error(ErrorCode::kNotOrthogonal, "holonomy generator is not in SO(7)");
  }

  static HolonomySpec trivial() { return HolonomySpec(); }

  const std::vector<Matrix<S>>& generators() const { return generators_; }
  bool is_trivial() const { return generators_.empty(); }

  /// g⁻¹ H g, the holonomy based at the rotated frame.
  HolonomySpec conjugated(const Matrix<S>& g, double tol = kDefaultTol) const {
    Matrix<S> ginv = inverse(g);
    std::vector<Matrix<S>> out;
    for (const auto& h : generators_) out.push_back(ginv * h * g);
    return HolonomySpec(std::move(out), tol);
  }

 private:
  std::vector<Matrix<S>> generators_;
};

/// g ∈ N_f: g⁻¹ h g ∈ G2 for every generator h.
template <Scalar S>
bool nf_member(const Matrix<S>& g, const HolonomySpec<S>& h, double tol = kDefaultTol) {
  if (!is_so7(g, tol)) throw Error(ErrorCode::kNotOrthogonal, "nf_member: g is not in SO(7)");
  Matrix<S> ginv = g.transpose();
  for (const auto& gen : h.generators())
    if (!is_g2(Matrix<S>(ginv * gen * g), tol)) return false;
  return true;
}

/// Dimension of the tangent space of N_f/G2 at the identity coset:
/// {A ∈ so(7) : A − h⁻¹Ah ∈ g2 for all generators h} modulo g2.
template <Scalar S>
std::size_t coset_tangent_dim(const HolonomySpec<S>& h, const G2Structure<S>& s) {
  for (const auto& gen : h.generators())
    if (!is_g2(gen, s.phi(), s.tol()))
      throw Error(ErrorCode::kInvalidArgument, "coset_tangent_dim: the identity frame is not in N_f");
  auto g2 = g2_algebra_basis(s);
  auto so7 = so7_basis<S>();
  auto complement = detail::annihilator(g2.matrices());
  Matrix<S> system(complement.size() * h.generators().size(), so7.size());
  std::size_t row = 0;
  for (const auto& gen : h.generators()) {
    Matrix<S> ginv = inverse(gen);
    for (const auto& y : complement) {
      for (std::size_t k = 0; k < so7.size(); ++k)
        system(row, k) = frobenius(y, Matrix<S>(so7[k] - ginv * so7[k] * gen));
      ++row;
    }
  }
  std::size_t tangent = so7.size() - rank(system);
  return tangent - g2.dim();
}

// --- sampling (float mode) ----------------------------------------------------------

template <Scalar S>
Matrix<S> random_antisymmetric(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix<S> a(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      S v = from_double<S>(normal(rng));
      a(i, j) = v;
      a(j, i) = -v;
    }
  return a;
}

/// exp of a random element of g2.
inline Matrix<double> random_g2_element(std::mt19937_64& rng, const SubalgebraBasis<double>& g2, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix<double> a(kDim, kDim);
  for (const auto& b : g2.matrices()) a += b * normal(rng);
  return expm(a);
}

}  // namespace g2kit
