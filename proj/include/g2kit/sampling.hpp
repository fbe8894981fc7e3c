#pragma once

// Seeded generators of small random rationals, forms and matrices. Values
// are drawn as rationals and converted, so both modes see the same inputs
// for a given seed.

#include <random>

#include "g2kit/exterior.hpp"

namespace g2kit {

template <Scalar S>
S random_scalar(std::mt19937_64& rng, long max_num = 5, long max_den = 4) {
  std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  if constexpr (is_exact_v<S>) {
    return r;
  } else {
    return r.get_d();
  }
}

template <Scalar S>
KForm<S> random_form(std::mt19937_64& rng, int degree) {
  KForm<S> out(degree);
  for (std::size_t p = 0; p < out.size(); ++p) out.coeff(p) = random_scalar<S>(rng);
  return out;
}

template <Scalar S>
Vec7<S> random_vector(std::mt19937_64& rng) {
  Vec7<S> v;
  for (auto& x : v) x = random_scalar<S>(rng);
  return v;
}

template <Scalar S>
Matrix<S> random_matrix(std::mt19937_64& rng) {
  Matrix<S> m(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m(i, j) = random_scalar<S>(rng);
  return m;
}

template <Scalar S>
Matrix<S> random_symmetric(std::mt19937_64& rng) {
  Matrix<S> m(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) {
      m(i, j) = random_scalar<S>(rng);
      m(j, i) = m(i, j);
    }
  return m;
}

}  // namespace g2kit
