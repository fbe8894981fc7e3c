#pragma once

// Small dense linear algebra over either scalar mode.
//
// Exact mode uses fraction-exact Gaussian elimination, so ranks and
// nullspaces carry no tolerance at all. Float mode uses partial pivoting for
// solves and Eigen's SVD for rank decisions.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "g2kit/scalar.hpp"

namespace g2kit {

/// Relative singular-value cutoff used for float-mode rank decisions.
inline constexpr double kRankCutoff = 1e-8;

template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<S> values)
      : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) throw Error(ErrorCode::kInvalidArgument, "matrix initializer size");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::vector<S> column(std::size_t c) const {
    std::vector<S> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  void set_column(std::size_t c, const std::vector<S>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& k) {
    for (auto& x : data_) x *= k;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& k) { return a *= k; }
  friend Matrix operator*(const S& k, Matrix a) { return a *= k; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::kInvalidArgument, "matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (is_zero(aik, 0.0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
    if (a.cols_ != v.size()) throw Error(ErrorCode::kInvalidArgument, "matrix-vector shape mismatch");
    std::vector<S> out(a.rows_, S(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<S>& data() const { return data_; }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::kInvalidArgument, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <Scalar S>
double max_abs(const Matrix<S>& m) {
  double best = 0.0;
  for (const auto& x : m.data()) best = std::max(best, abs_value(x));
  return best;
}

template <Scalar S>
bool approx_equal(const Matrix<S>& a, const Matrix<S>& b, double tol = kDefaultTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return max_abs(a - b) <= tol;
  }
}

template <Scalar S>
bool is_symmetric(const Matrix<S>& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (!near(m(i, j), m(j, i), tol)) return false;
  return true;
}

template <Scalar S>
S trace(const Matrix<S>& m) {
  S t(0);
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

template <Scalar S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

/// Frobenius inner product.
template <Scalar S>
S frobenius(const Matrix<S>& a, const Matrix<S>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

template <Scalar S>
Eigen::MatrixXd to_eigen(const Matrix<S>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = to_double(m(r, c));
  return out;
}

inline Matrix<double> from_eigen(const Eigen::MatrixXd& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

namespace detail {

// Row-reduces in place; returns pivot columns. Float mode pivots on the
// largest entry and treats entries below tol as zero.
template <Scalar S>
std::vector<std::size_t> row_reduce(Matrix<S>& m, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = row;
    if constexpr (is_exact_v<S>) {
      while (best < m.rows() && sgn(m(best, col)) == 0) ++best;
      if (best == m.rows()) continue;
    } else {
      for (std::size_t r = row + 1; r < m.rows(); ++r)
        if (std::abs(m(r, col)) > std::abs(m(best, col))) best = r;
      if (std::abs(m(best, col)) <= tol) continue;
    }
    if (best != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(best, c));
    S inv = S(1) / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col), 0.0)) continue;
      S factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <Scalar S>
S determinant(Matrix<S> m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kInvalidArgument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  S det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    if constexpr (is_exact_v<S>) {
      while (best < n && sgn(m(best, col)) == 0) ++best;
      if (best == n) return S(0);
    } else {
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(m(r, col)) > std::abs(m(best, col))) best = r;
      if (m(best, col) == 0.0) return 0.0;
    }
    if (best != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(col, c), m(best, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m(r, col), 0.0)) continue;
      S factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

/// Unique solution of a (possibly overdetermined) consistent system A x = b.
/// Throws kNoSolution if the system is inconsistent or underdetermined.
template <Scalar S>
std::vector<S> solve(const Matrix<S>& a, const std::vector<S>& b, double tol = kDefaultTol) {
  if (a.rows() != b.size()) throw Error(ErrorCode::kInvalidArgument, "solve: shape mismatch");
  Matrix<S> aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  auto pivots = detail::row_reduce(aug, tol);
  if (!pivots.empty() && pivots.back() == a.cols())
    throw Error(ErrorCode::kNoSolution, "solve: inconsistent linear system");
  if (pivots.size() != a.cols()) throw Error(ErrorCode::kNoSolution, "solve: system is underdetermined");
  std::vector<S> x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
  if constexpr (!is_exact_v<S>) {
    // Partial pivoting hides small inconsistencies; check the residual.
    auto ax = a * x;
    double scale = 1.0;
    for (const auto& v : b) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < b.size(); ++i)
      if (std::abs(ax[i] - b[i]) > 1e3 * tol * scale)
        throw Error(ErrorCode::kNoSolution, "solve: residual too large");
  }
  return x;
}

template <Scalar S>
Matrix<S> inverse(const Matrix<S>& a, double tol = kDefaultTol) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kInvalidArgument, "inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix<S> aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n + r) = S(1);
  }
  auto pivots = detail::row_reduce(aug, tol);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw Error(ErrorCode::kNoSolution, "matrix is singular");
  Matrix<S> inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

/// Rank: exact elimination in exact mode; singular values above
/// rel_cutoff * sigma_max in float mode.
template <Scalar S>
std::size_t rank(const Matrix<S>& m, double rel_cutoff = kRankCutoff) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if constexpr (is_exact_v<S>) {
    Matrix<S> copy = m;
    return detail::row_reduce(copy, 0.0).size();
  } else {
    Eigen::VectorXd sv = singular_values(to_eigen(m));
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rel_cutoff * sv(0)) ++r;
    return r;
  }
}

/// Basis of the right nullspace, one vector per column.
template <Scalar S>
Matrix<S> nullspace(const Matrix<S>& m, double rel_cutoff = kRankCutoff) {
  const std::size_t n = m.cols();
  if constexpr (is_exact_v<S>) {
    Matrix<S> red = m;
    auto pivots = detail::row_reduce(red, 0.0);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    Matrix<S> basis(n, n - pivots.size());
    std::size_t out = 0;
    for (std::size_t free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      basis(free, out) = S(1);
      for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], out) = -red(i, free);
      ++out;
    }
    return basis;
  } else {
    if (m.rows() == 0) return Matrix<double>::identity(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::size_t r = 0;
    double top = sv.size() > 0 ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (top > 0.0 && sv(i) > rel_cutoff * top) ++r;
    Matrix<double> basis(n, n - r);
    for (std::size_t j = r; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) basis(i, j - r) = svd.matrixV()(i, j);
    return basis;
  }
}

/// Stacks vectors as the columns of a matrix.
template <Scalar S>
Matrix<S> columns_matrix(const std::vector<std::vector<S>>& cols, std::size_t height) {
  Matrix<S> m(height, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
  return m;
}

}  // namespace g2kit
