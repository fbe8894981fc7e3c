#pragma once

// Reference implementations used only by the tests. They work from the
// definitions (multilinear evaluation, permutation sums, Levi-Civita
// symbols) and share nothing with the library beyond coefficient storage.

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "g2kit/g2kit.hpp"

namespace oracle {

using g2kit::KForm;
using g2kit::Matrix;
using g2kit::MultiIndex;
using g2kit::Rational;

/// Sign of a permutation of distinct integers, by cycle decomposition.
inline int perm_sign(std::vector<int> p) {
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (auto& x : p) x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
  std::vector<bool> seen(p.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// Levi-Civita symbol of a tuple of 1-based indices: 0 on repeats.
inline int levi_civita(const std::vector<int>& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] == idx[j]) return 0;
  return perm_sign(idx);
}

inline void for_each_permutation(int n, const std::function<void(const std::vector<int>&, int)>& f) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do f(p, perm_sign(p));
  while (std::next_permutation(p.begin(), p.end()));
}

inline long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// All strictly increasing 1-based k-tuples in lexicographic order.
inline std::vector<std::vector<int>> increasing_tuples(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= 7; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

/// Determinant by the Leibniz sum.
template <class S>
S leibniz_det(const std::vector<std::vector<S>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return S(1);
  S total(0);
  for_each_permutation(n, [&](const std::vector<int>& p, int sign) {
    S term(sign);
    for (int i = 0; i < n; ++i) term *= m[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
    total += term;
  });
  return total;
}

/// a(v1, ..., vk) = sum_I a_I det[(v_j)_{I_i}].
template <class S>
S evaluate(const KForm<S>& a, const std::vector<std::array<S, 7>>& vs) {
  const int k = a.degree();
  S total(0);
  for (const auto& idx : increasing_tuples(k)) {
    const S& c = a[MultiIndex(idx)];
    if (c == 0) continue;
    std::vector<std::vector<S>> m(static_cast<std::size_t>(k), std::vector<S>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = vs[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[i] - 1)];
    total += c * leibniz_det(m);
  }
  return total;
}

/// a(e_{i1}, ..., e_{ik}) for 1-based indices: sort, then apply the sign.
template <class S>
S evaluate_basis(const KForm<S>& a, const std::vector<int>& idx) {
  int eps = levi_civita(idx);
  if (eps == 0) return S(0);
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  return S(eps) * a[MultiIndex(sorted)];
}

template <class S>
std::array<S, 7> e(int i) {  // 1-based
  std::array<S, 7> v;
  v.fill(S(0));
  v[static_cast<std::size_t>(i - 1)] = S(1);
  return v;
}

/// Builds a form from its values on increasing basis tuples.
template <class S>
KForm<S> from_values(int k, const std::function<S(const std::vector<int>&)>& value) {
  KForm<S> out(k);
  for (const auto& idx : increasing_tuples(k)) out[MultiIndex(idx)] = value(idx);
  return out;
}

/// (a∧b)(v1..v_{p+q}) = 1/(p!q!) Σ_σ sgn σ a(v_σ(1..p)) b(v_σ(p+1..p+q)).
template <class S>
KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
  const int p = a.degree(), q = b.degree();
  return from_values<S>(p + q, [&](const std::vector<int>& idx) -> S {
    S total(0);
    for_each_permutation(p + q, [&](const std::vector<int>& perm, int sign) {
      std::vector<int> ia, ib;
      for (int i = 0; i < p; ++i) ia.push_back(idx[static_cast<std::size_t>(perm[i])]);
      for (int i = p; i < p + q; ++i) ib.push_back(idx[static_cast<std::size_t>(perm[i])]);
      total += S(sign) * evaluate_basis(a, ia) * evaluate_basis(b, ib);
    });
    return total / S(factorial(p) * factorial(q));
  });
}

/// (v⌟a)(e_J) = a(v, e_J).
template <class S>
KForm<S> interior(const std::array<S, 7>& v, const KForm<S>& a) {
  return from_values<S>(a.degree() - 1, [&](const std::vector<int>& idx) -> S {
    std::vector<std::array<S, 7>> vs{v};
    for (int i : idx) vs.push_back(e<S>(i));
    return evaluate(a, vs);
  });
}

/// Euclidean Hodge star from the Levi-Civita symbol: (∗a)_J = Σ_I a_I ε(I, J).
template <class S>
KForm<S> star_euclidean(const KForm<S>& a, int orientation = 1) {
  return from_values<S>(7 - a.degree(), [&](const std::vector<int>& jdx) -> S {
    S total(0);
    for (const auto& idx : increasing_tuples(a.degree())) {
      std::vector<int> all = idx;
      all.insert(all.end(), jdx.begin(), jdx.end());
      int eps = levi_civita(all);
      if (eps != 0) total += S(eps * orientation) * a[MultiIndex(idx)];
    }
    return total;
  });
}

/// ⟨a, b⟩_g = Σ_{I,J} a_I b_J det(g⁻¹[I, J]).
template <class S>
S inner(const KForm<S>& a, const KForm<S>& b, const Matrix<S>& ginv) {
  S total(0);
  const auto tuples = increasing_tuples(a.degree());
  for (const auto& i : tuples)
    for (const auto& j : tuples) {
      std::vector<std::vector<S>> m(i.size(), std::vector<S>(j.size()));
      for (std::size_t r = 0; r < i.size(); ++r)
        for (std::size_t c = 0; c < j.size(); ++c) m[r][c] = ginv(i[r] - 1, j[c] - 1);
      total += a[MultiIndex(i)] * b[MultiIndex(j)] * leibniz_det(m);
    }
  return total;
}

/// B_ij = coefficient of dx1..7 in (e_i⌟φ)∧(e_j⌟φ)∧φ, by the permutation sum.
template <class S>
Matrix<S> g2_bilinear(const KForm<S>& phi) {
  Matrix<S> b(7, 7);
  for (int i = 1; i <= 7; ++i)
    for (int j = i; j <= 7; ++j) {
      S total(0);
      for_each_permutation(7, [&](const std::vector<int>& p, int sign) {
        auto at = [&](int n) { return p[static_cast<std::size_t>(n)] + 1; };
        S x = evaluate_basis(phi, {i, at(0), at(1)});
        if (x == 0) return;
        S y = evaluate_basis(phi, {j, at(2), at(3)});
        if (y == 0) return;
        total += S(sign) * x * y * evaluate_basis(phi, {at(4), at(5), at(6)});
      });
      b(i - 1, j - 1) = total / S(2 * 2 * 6);
      b(j - 1, i - 1) = b(i - 1, j - 1);
    }
  return b;
}

/// The seven terms of φ₀ written out by hand.
template <class S>
KForm<S> phi0_literal() {
  KForm<S> out(3);
  out[MultiIndex{1, 2, 3}] = 1;
  out[MultiIndex{1, 4, 5}] = 1;
  out[MultiIndex{1, 6, 7}] = 1;
  out[MultiIndex{2, 4, 6}] = 1;
  out[MultiIndex{2, 5, 7}] = -1;
  out[MultiIndex{3, 4, 7}] = -1;
  out[MultiIndex{3, 5, 6}] = -1;
  return out;
}

/// (b⊙φ)(u,v,w) = φ(b̂u,v,w) + φ(u,b̂v,w) + φ(u,v,b̂w) with b̂ = bᵀ (Euclidean).
template <class S>
KForm<S> odot_definition(const Matrix<S>& b, const KForm<S>& phi) {
  auto apply = [&](const std::array<S, 7>& v) {
    std::array<S, 7> out;
    out.fill(S(0));
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 7; ++c) out[r] += b(c, r) * v[c];
    return out;
  };
  return from_values<S>(3, [&](const std::vector<int>& idx) -> S {
    auto u = e<S>(idx[0]), v = e<S>(idx[1]), w = e<S>(idx[2]);
    return evaluate(phi, {apply(u), v, w}) + evaluate(phi, {u, apply(v), w}) + evaluate(phi, {u, v, apply(w)});
  });
}

/// Applies a matrix to a vector.
template <class S>
std::array<S, 7> mul(const Matrix<S>& m, const std::array<S, 7>& v) {
  std::array<S, 7> out;
  out.fill(S(0));
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) out[r] += m(r, c) * v[c];
  return out;
}

}  // namespace oracle

namespace g2kit {

template <Scalar S>
void PrintTo(const KForm<S>& a, std::ostream* os) {
  *os << kform_to_json(a).dump();
}

template <Scalar S>
void PrintTo(const Matrix<S>& m, std::ostream* os) {
  *os << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    *os << (r ? "; " : "");
    for (std::size_t c = 0; c < m.cols(); ++c) *os << (c ? " " : "") << to_string(m(r, c));
  }
  *os << "]";
}

}  // namespace g2kit
