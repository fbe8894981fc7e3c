#pragma once

// Scalar types for the two computation modes.
//
// A computation runs either entirely over exact rationals (GMP mpq) or
// entirely over doubles. Every algorithm in g2kit is a template over one
// of these two types; there is no mixed-mode arithmetic.

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace g2kit {

using Rational = mpq_class;

inline constexpr double kDefaultTol = 1e-10;

enum class ErrorCode {
  kInvalidArgument,
  kDegreeOverflow,
  kNotPositiveDefinite,
  kNotG2Form,
  kInexact,           // an exact-mode computation needs an irrational value
  kConstraintViolation,
  kMetricMismatch,
  kNoSolution,
  kNotInSubspace,
  kNotOrthogonal,
  kNotSubalgebra,
  kUnsupportedModel,
  kParse,
};

/// Error carrying a stable code; the CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

// --- conversions ----------------------------------------------------------

template <Scalar S>
S from_int(long n) {
  return S(n);
}

template <Scalar S>
S from_ratio(long num, long den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if constexpr (is_exact_v<S>) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <Scalar S>
S from_double(double x) {
  if constexpr (is_exact_v<S>) {
    return Rational(x);
  } else {
    return x;
  }
}

// --- comparisons ----------------------------------------------------------

inline bool is_zero(double x, double tol = kDefaultTol) { return std::abs(x) <= tol; }
inline bool is_zero(const Rational& x, double /*tol*/ = kDefaultTol) { return sgn(x) == 0; }

template <Scalar S>
bool near(const S& a, const S& b, double tol = kDefaultTol) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Rational& x) { return std::abs(x.get_d()); }

inline int sign_of(double x, double tol = 0.0) {
  if (x > tol) return 1;
  if (x < -tol) return -1;
  return 0;
}
inline int sign_of(const Rational& x, double /*tol*/ = 0.0) { return sgn(x); }

// --- roots ------------------------------------------------------------------

namespace detail {

inline std::optional<mpz_class> exact_root(const mpz_class& n, unsigned long k) {
  if (sgn(n) < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_root(mpz_class(-n), k);
    if (!r) return std::nullopt;
    return mpz_class(-*r);
  }
  mpz_class root;
  if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return root;
}

}  // namespace detail

/// Exact k-th root of a rational if it is rational, else nullopt.
inline std::optional<Rational> exact_root(const Rational& x, unsigned long k) {
  auto num = detail::exact_root(x.get_num(), k);
  auto den = detail::exact_root(x.get_den(), k);
  if (!num || !den) return std::nullopt;
  Rational r(*num, *den);
  r.canonicalize();
  return r;
}

/// Square root in the scalar's mode; exact mode throws kInexact when the
/// root is irrational.
template <Scalar S>
S sqrt_scalar(const S& x, std::string_view what = "square root") {
  if constexpr (is_exact_v<S>) {
    if (sgn(x) < 0) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " of negative value");
    auto r = exact_root(x, 2);
    if (!r) {
      throw Error(ErrorCode::kInexact,
                  std::string(what) + " of " + x.get_str() + " is irrational; use float mode");
    }
    return *r;
  } else {
    if (x < 0.0) {
      if (x > -1e-12) return 0.0;
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " of negative value");
    }
    return std::sqrt(x);
  }
}

// --- text ---------------------------------------------------------------------

/// "p/q" for rationals (always with a denominator), shortest round-trip for doubles.
inline std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Parses "p", "p/q" or a decimal literal. Exact mode rejects decimals.
template <Scalar S>
S parse_scalar(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty scalar");
  if constexpr (is_exact_v<S>) {
    Rational r;
    if (s.find_first_not_of("+-0123456789/") != std::string::npos ||
        r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) {
      throw Error(ErrorCode::kParse, "expected an exact rational \"p/q\", got \"" + s + "\"");
    }
    if (sgn(r.get_den()) == 0) throw Error(ErrorCode::kParse, "zero denominator in \"" + s + "\"");
    r.canonicalize();
    return r;
  } else {
    auto slash = s.find('/');
    try {
      size_t used = 0;
      if (slash == std::string::npos) {
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      }
      double num = std::stod(s.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(s);
      std::string den_text = s.substr(slash + 1);
      double den = std::stod(den_text, &used);
      if (used != den_text.size() || den == 0.0) throw std::invalid_argument(s);
      return num / den;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParse, "not a number: \"" + s + "\"");
    }
  }
}

}  // namespace g2kit
