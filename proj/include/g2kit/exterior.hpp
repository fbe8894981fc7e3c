#pragma once

// Exterior algebra of a 7-dimensional real vector space.
//
// A k-form is stored densely over the C(7,k) strictly increasing
// multi-indices in lexicographic order. Internally an index set is a 7-bit
// mask (bit i <-> coordinate i+1); the public surface speaks 1-based indices.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g2kit/linalg.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit {

inline constexpr int kDim = 7;

template <Scalar S>
using Vec7 = std::array<S, kDim>;

template <Scalar S>
Vec7<S> zero_vec() {
  Vec7<S> v;
  v.fill(S(0));
  return v;
}

template <Scalar S>
Vec7<S> unit_vec(int i) {  // 1-based
  auto v = zero_vec<S>();
  v.at(i - 1) = S(1);
  return v;
}

namespace detail {

struct IndexTables {
  // masks[k] lists the masks of popcount k in lexicographic tuple order.
  std::array<std::vector<std::uint8_t>, kDim + 1> masks;
  std::array<int, 128> position{};

  IndexTables() {
    for (int k = 0; k <= kDim; ++k) {
      std::vector<int> tuple;
      fill(k, 0, tuple);
    }
  }

 private:
  void fill(int k, int start, std::vector<int>& tuple) {
    if (static_cast<int>(tuple.size()) == k) {
      std::uint8_t mask = 0;
      for (int i : tuple) mask |= static_cast<std::uint8_t>(1u << i);
      position[mask] = static_cast<int>(masks[k].size());
      masks[k].push_back(mask);
      return;
    }
    for (int i = start; i < kDim; ++i) {
      tuple.push_back(i);
      fill(k, i + 1, tuple);
      tuple.pop_back();
    }
  }
};

inline const IndexTables& tables() {
  static const IndexTables t;
  return t;
}

// Sign of the shuffle that sorts the concatenation (I, J) of disjoint sets.
inline int shuffle_sign(std::uint8_t left, std::uint8_t right) {
  int inversions = 0;
  for (int j = 0; j < kDim; ++j) {
    if (!(right & (1u << j))) continue;
    // elements of `left` greater than j precede j in the concatenation
    inversions += std::popcount(static_cast<unsigned>(left) >> (j + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

inline std::vector<int> mask_to_indices(std::uint8_t mask) {
  std::vector<int> out;
  for (int i = 0; i < kDim; ++i)
    if (mask & (1u << i)) out.push_back(i + 1);
  return out;
}

}  // namespace detail

inline int binomial7(int k) {
  return static_cast<int>(detail::tables().masks.at(k).size());
}

/// Strictly increasing tuple of 1-based coordinate indices.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> indices) : MultiIndex(std::vector<int>(indices)) {}
  explicit MultiIndex(const std::vector<int>& indices) {
    int prev = 0;
    for (int i : indices) {
      if (i < 1 || i > kDim) throw Error(ErrorCode::kInvalidArgument, "multi-index entry out of range 1..7");
      if (i <= prev) throw Error(ErrorCode::kInvalidArgument, "multi-index must be strictly increasing");
      prev = i;
      mask_ |= static_cast<std::uint8_t>(1u << (i - 1));
    }
  }
  static MultiIndex from_mask(std::uint8_t mask) {
    MultiIndex m;
    m.mask_ = mask & 0x7f;
    return m;
  }

  int size() const { return std::popcount(static_cast<unsigned>(mask_)); }
  std::uint8_t mask() const { return mask_; }
  std::vector<int> indices() const { return detail::mask_to_indices(mask_); }
  MultiIndex complement() const { return from_mask(static_cast<std::uint8_t>(~mask_ & 0x7f)); }

  friend bool operator==(MultiIndex a, MultiIndex b) { return a.mask_ == b.mask_; }

 private:
  std::uint8_t mask_ = 0;
};

inline std::string to_string(MultiIndex m) {
  std::string s = "dx";
  for (int i : m.indices()) s += static_cast<char>('0' + i);
  return s;
}

template <Scalar S>
class KForm {
 public:
  KForm() : KForm(0) {}
  explicit KForm(int degree) : degree_(check_degree(degree)), coeffs_(binomial7(degree), S(0)) {}
  KForm(int degree, std::vector<S> coeffs) : degree_(check_degree(degree)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != binomial7(degree))
      throw Error(ErrorCode::kInvalidArgument, "k-form needs exactly C(7,k) coefficients");
  }

  /// dx_{i1} ∧ ... ∧ dx_{ik}, indices 1-based and strictly increasing.
  static KForm basis(std::initializer_list<int> indices, S coeff = S(1)) {
    MultiIndex idx(indices);
    KForm f(idx.size());
    f[idx] = coeff;
    return f;
  }
  static KForm basis(MultiIndex idx, S coeff = S(1)) {
    KForm f(idx.size());
    f[idx] = coeff;
    return f;
  }
  static KForm scalar(S value) { return KForm(0, {value}); }

  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  const S& coeff(std::size_t pos) const { return coeffs_[pos]; }
  S& coeff(std::size_t pos) { return coeffs_[pos]; }
  const std::vector<S>& coeffs() const { return coeffs_; }

  MultiIndex index_at(std::size_t pos) const {
    return MultiIndex::from_mask(detail::tables().masks[degree_][pos]);
  }

  const S& operator[](MultiIndex idx) const { return coeffs_[position(idx)]; }
  S& operator[](MultiIndex idx) { return coeffs_[position(idx)]; }

  KForm& operator+=(const KForm& o) {
    check_degree_match(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  KForm& operator-=(const KForm& o) {
    check_degree_match(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  KForm& operator*=(const S& k) {
    for (auto& c : coeffs_) c *= k;
    return *this;
  }

  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(KForm a, const S& k) { return a *= k; }
  friend KForm operator*(const S& k, KForm a) { return a *= k; }
  friend KForm operator-(KForm a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }

  friend bool operator==(const KForm& a, const KForm& b) {
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

  double max_abs() const {
    double best = 0.0;
    for (const auto& c : coeffs_) best = std::max(best, abs_value(c));
    return best;
  }

  bool is_zero(double tol = kDefaultTol) const {
    for (const auto& c : coeffs_)
      if (!g2kit::is_zero(c, tol)) return false;
    return true;
  }

 private:
  static int check_degree(int k) {
    if (k < 0 || k > kDim) throw Error(ErrorCode::kDegreeOverflow, "form degree must lie in 0..7");
    return k;
  }
  std::size_t position(MultiIndex idx) const {
    if (idx.size() != degree_) throw Error(ErrorCode::kInvalidArgument, "multi-index length != form degree");
    return static_cast<std::size_t>(detail::tables().position[idx.mask()]);
  }
  void check_degree_match(const KForm& o) const {
    if (o.degree_ != degree_) throw Error(ErrorCode::kInvalidArgument, "form degree mismatch");
  }

  int degree_;
  std::vector<S> coeffs_;
};

/// Exact equality in exact mode, max-norm within tol otherwise.
template <Scalar S>
bool approx_equal(const KForm<S>& a, const KForm<S>& b, double tol = kDefaultTol) {
  if (a.degree() != b.degree()) return false;
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return (a - b).max_abs() <= tol;
  }
}

/// The reference top form dx1∧...∧dx7.
template <Scalar S>
KForm<S> reference_top_form() {
  return KForm<S>::basis({1, 2, 3, 4, 5, 6, 7});
}

template <Scalar S>
KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
  if (a.degree() + b.degree() > kDim)
    throw Error(ErrorCode::kDegreeOverflow, "wedge: degree " + std::to_string(a.degree() + b.degree()) + " exceeds 7");
  const auto& t = detail::tables();
  KForm<S> out(a.degree() + b.degree());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a.coeff(i), 0.0)) continue;
    std::uint8_t mi = t.masks[a.degree()][i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint8_t mj = t.masks[b.degree()][j];
      if (mi & mj) continue;
      if (is_zero(b.coeff(j), 0.0)) continue;
      S term = a.coeff(i) * b.coeff(j);
      auto& slot = out.coeff(t.position[mi | mj]);
      if (detail::shuffle_sign(mi, mj) > 0)
        slot += term;
      else
        slot -= term;
    }
  }
  return out;
}

/// v ⌟ a: contraction of v into the first slot.
template <Scalar S>
KForm<S> interior(const Vec7<S>& v, const KForm<S>& a) {
  if (a.degree() == 0) throw Error(ErrorCode::kInvalidArgument, "interior product of a 0-form");
  const auto& t = detail::tables();
  KForm<S> out(a.degree() - 1);
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (is_zero(a.coeff(p), 0.0)) continue;
    std::uint8_t mask = t.masks[a.degree()][p];
    int before = 0;
    for (int i = 0; i < kDim; ++i) {
      if (!(mask & (1u << i))) continue;
      if (!is_zero(v[i], 0.0)) {
        S term = v[i] * a.coeff(p);
        auto& slot = out.coeff(t.position[mask & ~(1u << i)]);
        if (before % 2 == 0)
          slot += term;
        else
          slot -= term;
      }
      ++before;
    }
  }
  return out;
}

/// k-th compound matrix: entry (I, J) is the minor det(M[I, J]).
template <Scalar S>
Matrix<S> compound(const Matrix<S>& m, int k) {
  const auto& masks = detail::tables().masks.at(k);
  const std::size_t n = masks.size();
  Matrix<S> out(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    auto rows = detail::mask_to_indices(masks[a]);
    for (std::size_t b = 0; b < n; ++b) {
      auto cols = detail::mask_to_indices(masks[b]);
      Matrix<S> minor(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) minor(r, c) = m(rows[r] - 1, cols[c] - 1);
      out(a, b) = k == 0 ? S(1) : determinant(minor);
    }
  }
  return out;
}

enum class Orientation : int { kPositive = 1, kNegative = -1 };

inline int sign(Orientation o) { return static_cast<int>(o); }
inline Orientation opposite(Orientation o) {
  return o == Orientation::kPositive ? Orientation::kNegative : Orientation::kPositive;
}

/// Positive-definite symmetric bilinear form on R^7 together with the
/// data the Hodge star and form inner products need (inverse, determinant,
/// compound matrices of the inverse). Immutable once built.
template <Scalar S>
class Metric {
 public:
  Metric() : Metric(Matrix<S>::identity(kDim)) {}

  explicit Metric(Matrix<S> g, double tol = kDefaultTol) : g_(std::move(g)) {
    if (g_.rows() != kDim || g_.cols() != kDim) throw Error(ErrorCode::kInvalidArgument, "metric must be 7x7");
    if (!is_symmetric(g_, tol)) throw Error(ErrorCode::kNotPositiveDefinite, "metric is not symmetric");
    check_positive_definite(tol);
    euclidean_ = approx_equal(g_, Matrix<S>::identity(kDim), 0.0);
    if (euclidean_) {
      inv_ = g_;
      det_ = S(1);
      sqrt_det_ = S(1);
      return;
    }
    inv_ = inverse(g_);
    det_ = determinant(g_);
    if constexpr (is_exact_v<S>) {
      if (auto r = exact_root(det_, 2)) sqrt_det_ = *r;
    } else {
      sqrt_det_ = std::sqrt(det_);
    }
    for (int k = 0; k <= kDim; ++k) inv_compounds_[k] = compound(inv_, k);
  }

  static Metric euclidean() { return Metric(); }

  const Matrix<S>& matrix() const { return g_; }
  const Matrix<S>& inverse_matrix() const { return inv_; }
  const S& det() const { return det_; }
  bool is_euclidean() const { return euclidean_; }

  /// sqrt(det g); exact mode throws kInexact when it is irrational.
  const S& sqrt_det() const {
    if (!sqrt_det_)
      throw Error(ErrorCode::kInexact, "sqrt(det g) is irrational; Hodge star needs float mode");
    return *sqrt_det_;
  }

  /// Components of a k-form with all indices raised (Λ^k of g^{-1}).
  std::vector<S> raise(const KForm<S>& a) const {
    if (euclidean_) return a.coeffs();
    return inv_compounds_[a.degree()] * a.coeffs();
  }

  S pair(const Vec7<S>& u, const Vec7<S>& v) const {
    S s(0);
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) s += u[i] * g_(i, j) * v[j];
    return s;
  }

  friend bool operator==(const Metric& a, const Metric& b) { return a.g_ == b.g_; }

 private:
  void check_positive_definite(double tol) const {
    if constexpr (is_exact_v<S>) {
      for (int k = 1; k <= kDim; ++k) {
        Matrix<S> lead(k, k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) lead(r, c) = g_(r, c);
        if (sgn(determinant(lead)) <= 0)
          throw Error(ErrorCode::kNotPositiveDefinite, "metric is not positive definite");
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(g_));
      if (es.eigenvalues().minCoeff() < tol)
        throw Error(ErrorCode::kNotPositiveDefinite, "metric is not positive definite");
    }
  }

  Matrix<S> g_;
  Matrix<S> inv_;
  S det_;
  std::optional<S> sqrt_det_;
  bool euclidean_ = false;
  std::array<Matrix<S>, kDim + 1> inv_compounds_;
};

/// Metric volume form: sign(o) * sqrt(det g) dx1...7.
template <Scalar S>
KForm<S> volume_form(const Metric<S>& m, Orientation o) {
  S v = m.sqrt_det();
  if (o == Orientation::kNegative) v = -v;
  return KForm<S>(kDim, {v});
}

template <Scalar S>
KForm<S> hodge_star(const KForm<S>& a, const Metric<S>& m, Orientation o = Orientation::kPositive) {
  const auto& t = detail::tables();
  const int k = a.degree();
  std::vector<S> raised = m.raise(a);
  S scale = m.sqrt_det();
  if (o == Orientation::kNegative) scale = -scale;
  KForm<S> out(kDim - k);
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (is_zero(raised[p], 0.0)) continue;
    std::uint8_t mi = t.masks[k][p];
    std::uint8_t mj = static_cast<std::uint8_t>(~mi & 0x7f);
    S term = scale * raised[p];
    auto& slot = out.coeff(t.position[mj]);
    if (detail::shuffle_sign(mi, mj) > 0)
      slot += term;
    else
      slot -= term;
  }
  return out;
}

template <Scalar S>
S form_inner(const KForm<S>& a, const KForm<S>& b, const Metric<S>& m) {
  if (a.degree() != b.degree()) throw Error(ErrorCode::kInvalidArgument, "form_inner: degree mismatch");
  std::vector<S> raised = m.raise(b);
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a.coeff(i) * raised[i];
  return s;
}

template <Scalar S>
S form_inner(const KForm<S>& a, const KForm<S>& b) {
  return form_inner(a, b, Metric<S>::euclidean());
}

template <Scalar S>
S norm_squared(const KForm<S>& a, const Metric<S>& m) {
  return form_inner(a, a, m);
}

template <Scalar S>
KForm<S> flat(const Vec7<S>& v, const Metric<S>& m) {
  KForm<S> out(1);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out.coeff(i) += m.matrix()(i, j) * v[j];
  return out;
}

template <Scalar S>
Vec7<S> sharp(const KForm<S>& a, const Metric<S>& m) {
  if (a.degree() != 1) throw Error(ErrorCode::kInvalidArgument, "sharp needs a 1-form");
  auto v = zero_vec<S>();
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) v[i] += m.inverse_matrix()(i, j) * a.coeff(j);
  return v;
}

/// Value of a on basis vectors (e_{t1}, ..., e_{tk}); tuple entries are
/// 0-based and may repeat or be unsorted.
template <Scalar S>
S evaluate_on_basis(const KForm<S>& a, const std::vector<int>& tuple) {
  std::uint8_t mask = 0;
  int inversions = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (mask & (1u << tuple[i])) return S(0);
    mask |= static_cast<std::uint8_t>(1u << tuple[i]);
    for (std::size_t j = i + 1; j < tuple.size(); ++j)
      if (tuple[i] > tuple[j]) ++inversions;
  }
  const S& c = a.coeff(detail::tables().position[mask]);
  return inversions % 2 == 0 ? c : S(-c);
}

/// Pullback by a linear map: (M^*a)(v1..vk) = a(M v1, ..., M vk).
template <Scalar S>
KForm<S> pullback(const KForm<S>& a, const Matrix<S>& m) {
  if (m.rows() != kDim || m.cols() != kDim) throw Error(ErrorCode::kInvalidArgument, "pullback needs a 7x7 map");
  Matrix<S> c = compound(m, a.degree());
  // coefficient on I = sum_J a_J det(M[J, I])
  return KForm<S>(a.degree(), c.transpose() * a.coeffs());
}

/// Derivation action of an endomorphism E:
/// (E·a)(v1..vk) = sum_s a(v1, .., E v_s, .., vk).
template <Scalar S>
KForm<S> derivation(const Matrix<S>& e, const KForm<S>& a) {
  const auto& t = detail::tables();
  const int k = a.degree();
  KForm<S> out(k);
  for (std::size_t p = 0; p < out.size(); ++p) {
    auto idx = detail::mask_to_indices(t.masks[k][p]);
    std::vector<int> tuple(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = idx[i] - 1;
    S acc(0);
    for (int slot = 0; slot < k; ++slot) {
      const int col = tuple[slot];
      std::vector<int> probe = tuple;
      for (int m = 0; m < kDim; ++m) {
        const S& emc = e(m, col);
        if (is_zero(emc, 0.0)) continue;
        probe[slot] = m;
        acc += emc * evaluate_on_basis(a, probe);
      }
    }
    out.coeff(p) = acc;
  }
  return out;
}

}  // namespace g2kit
