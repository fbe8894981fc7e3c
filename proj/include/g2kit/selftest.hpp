#pragma once

// The invariant suite behind `g2kit selftest`. Each check runs in the mode
// its statement needs: algebraic identities exact, finite differences and
// matrix exponentials in float.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "g2kit/bryant.hpp"
#include "g2kit/lie.hpp"
#include "g2kit/models.hpp"
#include "g2kit/sampling.hpp"

namespace g2kit {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace selftest {

using Q = Rational;

struct Outcome {
  bool pass;
  double residual;
  std::string detail;
};

inline Outcome ok_if(bool pass, double residual = 0.0, std::string detail = {}) {
  return {pass, residual, std::move(detail)};
}

/// Relative error between an analytic derivative and a central difference of
/// the twist map along the great circle through p with velocity t.
inline double fd_relative_error(const G2Structure<double>& s, const TwistParams<double>& p,
                                const TwistTangent<double>& t, double h) {
  double speed = std::sqrt(t.cdot * t.cdot + norm_squared(t.omegadot, s.metric()));
  auto at = [&](double time) {
    double a = std::cos(speed * time), b = std::sin(speed * time) / speed;
    return TwistParams<double>(a * p.c + b * t.cdot, p.omega * a + t.omegadot * b);
  };
  KForm<double> fd = (twist(s, at(h)) - twist(s, at(-h))) * (1.0 / (2.0 * h));
  KForm<double> analytic = twist_derivative(s, p, t);
  return (fd - analytic).max_abs() / std::max(analytic.max_abs(), 1e-300);
}

/// Random unit tangent at p, with ω̇ in span{dx1..dxk}.
inline TwistTangent<double> random_tangent(std::mt19937_64& rng, const TwistParams<double>& p, int k = kDim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double cdot = normal(rng);
  KForm<double> wdot(1);
  for (int i = 0; i < k; ++i) wdot.coeff(i) = normal(rng);
  double along = cdot * p.c + form_inner(wdot, p.omega);
  cdot -= along * p.c;
  wdot -= p.omega * along;
  double n = std::sqrt(cdot * cdot + form_inner(wdot, wdot));
  return {cdot / n, wdot * (1.0 / n)};
}

inline std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> exterior_checks() {
  return {
      {"graded commutativity a∧b = (−1)^{pq} b∧a (exact, 100 pairs)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         std::uniform_int_distribution<int> deg(0, 7);
         for (int n = 0; n < 100; ++n) {
           int p = deg(rng), q = std::uniform_int_distribution<int>(0, 7 - p)(rng);
           auto a = random_form<Q>(rng, p), b = random_form<Q>(rng, q);
           Q sign = (p * q) % 2 == 0 ? Q(1) : Q(-1);
           if (wedge(a, b) != wedge(b, a) * sign) return ok_if(false, 1.0, "degrees " + std::to_string(p) + "," + std::to_string(q));
         }
         return ok_if(true);
       }},
      {"interior product is an antiderivation (exact, 100 cases)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         for (int n = 0; n < 100; ++n) {
           int p = std::uniform_int_distribution<int>(1, 6)(rng);
           int q = std::uniform_int_distribution<int>(1, 7 - p)(rng);
           auto a = random_form<Q>(rng, p), b = random_form<Q>(rng, q);
           auto v = random_vector<Q>(rng);
           Q sign = p % 2 == 0 ? Q(1) : Q(-1);
           if (interior(v, wedge(a, b)) != wedge(interior(v, a), b) + wedge(a, interior(v, b)) * sign)
             return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"∗∗ = id on every degree (exact; Euclidean and diag(4,1,..,1))",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         Matrix<Q> g = Matrix<Q>::identity(7);
         g(0, 0) = 4;
         for (const auto& m : {Metric<Q>(), Metric<Q>(g)})
           for (int k = 0; k <= 7; ++k)
             for (int n = 0; n < 5; ++n) {
               auto a = random_form<Q>(rng, k);
               if (hodge_star(hodge_star(a, m), m) != a) return ok_if(false, 1.0, "degree " + std::to_string(k));
             }
         return ok_if(true);
       }},
      {"a∧∗b = ⟨a,b⟩ vol (exact, 100 pairs incl. non-Euclidean metric)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         Matrix<Q> g = Matrix<Q>::identity(7);
         g(0, 0) = 4;
         g(2, 2) = Q(9, 4);
         for (const auto& m : {Metric<Q>(), Metric<Q>(g)})
           for (int n = 0; n < 50; ++n) {
             int k = std::uniform_int_distribution<int>(0, 7)(rng);
             auto a = random_form<Q>(rng, k), b = random_form<Q>(rng, k);
             if (wedge(a, hodge_star(b, m)) != volume_form(m, Orientation::kPositive) * form_inner(a, b, m))
               return ok_if(false, 1.0);
           }
         return ok_if(true);
       }},
      {"∗ with orientation −1 is −∗ with orientation +1 (exact)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         Metric<Q> m;
         for (int k = 0; k <= 7; ++k) {
           auto a = random_form<Q>(rng, k);
           if (hodge_star(a, m, Orientation::kNegative) != -hodge_star(a, m, Orientation::kPositive))
             return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
  };
}

inline std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> g2core_checks() {
  return {
      {"metric_from_phi(φ₀) = (identity, +1) and ⟨φ₀,φ₀⟩ = 7 (exact)",
       [](std::uint64_t) {
         auto induced = metric_from_phi(phi0<Q>());
         bool pass = induced.metric.matrix() == Matrix<Q>::identity(7) &&
                     induced.orientation == Orientation::kPositive && form_inner(phi0<Q>(), phi0<Q>()) == 7;
         return ok_if(pass);
       }},
      {"β ↦ ∗(φ₀∧β) has two eigenspaces of dimensions 7 and 14 (exact ranks)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         const auto& t = s.two_form_operator();
         auto r7 = rank(Matrix<Q>(t - Matrix<Q>::identity(21) * s.lambda7()));
         auto r14 = rank(Matrix<Q>(t - Matrix<Q>::identity(21) * s.lambda14()));
         bool pass = r7 == 14 && r14 == 7;
         return ok_if(pass, 0.0, "lambda7=" + to_string(s.lambda7()) + " lambda14=" + to_string(s.lambda14()));
       }},
      {"decompose3 projector ranks over the 35 basis 3-forms are 1, 7, 27 (exact)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         Matrix<Q> p1(35, 35), p7(35, 35), p27(35, 35);
         for (std::size_t j = 0; j < 35; ++j) {
           KForm<Q> e(3);
           e.coeff(j) = 1;
           auto d = decompose3(e, s);
           p1.set_column(j, d.p1.coeffs());
           p7.set_column(j, d.p7.coeffs());
           p27.set_column(j, d.p27.coeffs());
         }
         bool pass = rank(p1) == 1 && rank(p7) == 7 && rank(p27) == 27;
         return ok_if(pass);
       }},
      {"p1 + p7 + p27 = η with pairwise orthogonal parts (exact, 50 random)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 50; ++n) {
           auto eta = random_form<Q>(rng, 3);
           auto d = decompose3(eta, s);
           if (d.p1 + d.p7 + d.p27 != eta || s.inner(d.p1, d.p7) != 0 || s.inner(d.p1, d.p27) != 0 ||
               s.inner(d.p7, d.p27) != 0)
             return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"⊙ on antisymmetric matrices: kernel 14, image 7 inside Λ³₇ (exact)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         auto basis = so7_basis<Q>();
         Matrix<Q> images(35, basis.size());
         for (std::size_t k = 0; k < basis.size(); ++k) {
           auto img = odot(basis[k], s);
           if (!decompose3(img, s).p27.is_zero() || !decompose3(img, s).p1.is_zero()) return ok_if(false, 1.0, "image leaves Λ³₇");
           images.set_column(k, img.coeffs());
         }
         auto r = rank(images);
         return ok_if(r == 7 && basis.size() - r == 14, 0.0, "rank " + std::to_string(r));
       }},
      {"⊙ on symmetric matrices is injective with image Λ³₁ ⊕ Λ³₂₇ (exact)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         const auto& images = s.odot_symmetric_images();
         for (std::size_t c = 0; c < images.cols(); ++c)
           if (!decompose3(KForm<Q>(3, images.column(c)), s).p7.is_zero()) return ok_if(false, 1.0);
         return ok_if(rank(images) == 28);
       }},
      {"odot_inverse ∘ odot = identity on symmetric matrices (exact, 20 random)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 20; ++n) {
           auto b = random_symmetric<Q>(rng);
           if (odot_inverse(odot(b, s), s).b != b) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"frame formula b_ij ω_i∧(e_j⌟φ) equals ⊙ (exact, 20 random)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 20; ++n) {
           auto b = random_symmetric<Q>(rng);
           if (odot_local(b, s) != odot(b, s)) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"π₁(ω∧∗(ω∧∗φ₀)) = (3/7)|ω|² φ₀ (exact, 100 random ω)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 100; ++n) {
           auto w = random_form<Q>(rng, 1);
           auto eta = wedge(w, s.star(wedge(w, s.star_phi())));
           if (decompose3(eta, s).p1 != s.phi() * (Q(3, 7) * norm_squared(w, s.metric()))) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"∗φ∧∗(∗φ∧α) = ±3∗α with one global sign (exact, 100 random α)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         const auto& sp = s.star_phi();
         auto probe = KForm<Q>::basis({1});
         auto lhs0 = wedge(sp, s.star(wedge(sp, probe)));
         Q sign = lhs0 == s.star(probe) * Q(3) ? Q(1) : Q(-1);
         for (int n = 0; n < 100; ++n) {
           auto a = random_form<Q>(rng, 1);
           if (wedge(sp, s.star(wedge(sp, a))) != s.star(a) * Q(3) * sign) return ok_if(false, 1.0);
         }
         return ok_if(true, 0.0, "global sign " + to_string(sign));
       }},
      {"φ∧∗φ = 7 vol (exact)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         return ok_if(wedge(s.phi(), s.star_phi()) == s.vol() * Q(7));
       }},
  };
}

inline std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> bryant_checks() {
  return {
      {"metric preservation: metric_from_phi(twist) = (g, o) (exact, 100 rational sphere points)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 100; ++n) {
           auto p = sample_twist_params<Q>(rng, 7, n % 10 == 0);
           auto induced = metric_from_phi(twist(s, p));
           if (!(induced.metric == s.metric()) || induced.orientation != s.orientation()) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"antipodal symmetry twist(c, ω) = twist(−c, −ω) (exact)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 50; ++n) {
           auto p = sample_twist_params<Q>(rng);
           if (twist(s, p) != twist(s, p.antipode())) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"twist_decomposed = decompose3 ∘ twist componentwise (exact, 100)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 100; ++n) {
           auto p = sample_twist_params<Q>(rng, 7, n % 10 == 0);
           auto a = twist_decomposed(s, p);
           auto b = decompose3(twist(s, p), s);
           if (a.p1 != b.p1 || a.p7 != b.p7 || a.p27 != b.p27) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"⟨φ̃, φ₀⟩ = 8c² − 1 (exact, 100)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 100; ++n) {
           auto p = sample_twist_params<Q>(rng);
           if (s.inner(twist(s, p), s.phi()) != 8 * p.c * p.c - 1) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"recover ∘ twist = id mod antipode, incl. c = 0 and |ω| ∈ {0, 1} (exact, 100)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         std::vector<TwistParams<Q>> cases{{Q(1), KForm<Q>(1)}, {Q(-1), KForm<Q>(1)},
                                           {Q(0), KForm<Q>::basis({1})}, {Q(0), KForm<Q>::basis({7}, Q(-1))}};
         for (int n = 0; n < 100; ++n) cases.push_back(sample_twist_params<Q>(rng, 7, n % 10 == 0));
         for (const auto& p : cases) {
           auto r = recover_detailed(s, twist(s, p));
           if (!antipodally_equal(r.params, p) || r.residual != 0.0) return ok_if(false, r.residual);
         }
         return ok_if(true, 0.0, std::to_string(cases.size()) + " cases");
       }},
      {"closure: twists of a twisted structure stay in the same metric class (exact)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 20; ++n) {
           G2Structure<Q> s2(twist(s, sample_twist_params<Q>(rng)));
           auto phit = twist(s2, sample_twist_params<Q>(rng, 7, n % 4 == 0));
           auto r = recover_detailed(s, phit);
           if (r.residual != 0.0) return ok_if(false, r.residual);
         }
         return ok_if(true);
       }},
      {"derivative vs central differences: rel. error ≤ 1e-6 at h = 1e-5 (float, 50)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<double>();
         double worst = 0.0;
         for (int n = 0; n < 50; ++n) {
           auto p = sample_twist_params<double>(rng, 7, n % 10 == 0);
           worst = std::max(worst, fd_relative_error(s, p, random_tangent(rng, p), 1e-5));
         }
         return ok_if(worst <= 1e-6, worst);
       }},
      {"derivative identity ω̇∧∗(ω₀∧∗φ) + ω₀∧∗(ω̇∧∗φ) = h⊙φ (exact, 50)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         for (int n = 0; n < 50; ++n) {
           auto w0 = random_form<Q>(rng, 1), wd = random_form<Q>(rng, 1);
           auto lhs = wedge(wd, s.star(wedge(w0, s.star_phi()))) + wedge(w0, s.star(wedge(wd, s.star_phi())));
           Matrix<Q> h(7, 7);
           for (int i = 0; i < 7; ++i)
             for (int j = 0; j < 7; ++j) h(i, j) = wd.coeff(i) * w0.coeff(j) + w0.coeff(i) * wd.coeff(j);
           if (lhs != odot(h, s)) return ok_if(false, 1.0);
         }
         return ok_if(true);
       }},
      {"derivative injective: rank 7 at 20 random points incl. c = 0 (exact rank, float margin)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<Q>();
         double margin = 1e300;
         for (int n = 0; n < 20; ++n) {
           auto p = sample_twist_params<Q>(rng, 7, n % 4 == 0);
           auto r = derivative_rank(s, p, 7);
           if (r.rank != 7) return ok_if(false, 0.0, "rank " + std::to_string(r.rank));
           margin = std::min(margin, r.margin);
         }
         return ok_if(true, 0.0, "min singular value " + to_string(margin));
       }},
  };
}

inline std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> lie_checks() {
  return {
      {"dim g2 = 14, bracket-closed; dim so(7) = 21 (exact)",
       [](std::uint64_t) {
         auto g2 = g2_algebra_basis(standard_structure<Q>());
         return ok_if(g2.dim() == 14 && bracket_closed(g2.matrices()) && so7_algebra<Q>().dim() == 21);
       }},
      {"normalizer of g2 in so(7) has dimension 14 and contains g2 (exact)",
       [](std::uint64_t) {
         auto g2 = g2_algebra_basis(standard_structure<Q>());
         auto n = lie_normalizer(so7_algebra<Q>(), g2);
         bool contains = true;
         for (const auto& h : g2.matrices()) contains = contains && in_span(h, n.matrices());
         return ok_if(n.dim() == 14 && contains && bracket_closed(n.matrices()), 0.0,
                      "dim " + std::to_string(n.dim()));
       }},
      {"infinitesimal_action kernel on so(7) is exactly span(g2) (exact)",
       [](std::uint64_t) {
         auto s = standard_structure<Q>();
         auto basis = so7_basis<Q>();
         Matrix<Q> images(35, basis.size());
         for (std::size_t k = 0; k < basis.size(); ++k) images.set_column(k, infinitesimal_action(basis[k], s).coeffs());
         Matrix<Q> ker = nullspace(images);
         std::vector<Matrix<Q>> kernel;
         for (std::size_t c = 0; c < ker.cols(); ++c) {
           Matrix<Q> a(7, 7);
           for (std::size_t k = 0; k < basis.size(); ++k) a += basis[k] * ker(k, c);
           kernel.push_back(a);
         }
         auto g2 = g2_algebra_basis(s).matrices();
         auto both = kernel;
         both.insert(both.end(), g2.begin(), g2.end());
         return ok_if(kernel.size() == 14 && span_dimension(both) == 14);
       }},
      {"exp(tA) ∈ G2 for every g2 basis element, t ∈ {0.1, 1} (float)",
       [](std::uint64_t) {
         auto g2 = g2_algebra_basis(standard_structure<double>());
         double worst = 0.0;
         for (const auto& a : g2.matrices())
           for (double t : {0.1, 1.0}) {
             auto g = expm(Matrix<double>(a * t));
             worst = std::max(worst, (act(g, phi0<double>()) - phi0<double>()).max_abs());
             if (!is_g2(g, 1e-9)) return ok_if(false, worst);
           }
         return ok_if(true, worst);
       }},
      {"conjugation covariance nf_member(g, H) ⇔ nf_member(1, g⁻¹Hg) (float, 20 samples)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto g2 = g2_algebra_basis(standard_structure<double>());
         for (int n = 0; n < 20; ++n) {
           HolonomySpec<double> h({random_g2_element(rng, g2), random_g2_element(rng, g2)}, 1e-9);
           Matrix<double> g = n % 2 == 0 ? random_g2_element(rng, g2) : expm(random_antisymmetric<double>(rng));
           bool direct = nf_member(g, h, 1e-8);
           bool conj = nf_member(Matrix<double>::identity(7), h.conjugated(g, 1e-9), 1e-8);
           if (direct != conj || direct != (n % 2 == 0)) return ok_if(false, 0.0, "sample " + std::to_string(n));
         }
         return ok_if(true);
       }},
      {"coset_tangent_dim: trivial holonomy 7 = 21 − 14; dense G2 sample 0",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<double>();
         auto g2 = g2_algebra_basis(s);
         auto trivial = coset_tangent_dim(HolonomySpec<double>::trivial(), s);
         HolonomySpec<double> dense({random_g2_element(rng, g2), random_g2_element(rng, g2)}, 1e-9);
         auto full = coset_tangent_dim(dense, s);
         return ok_if(trivial == 7 && full == 0, 0.0,
                      "trivial " + std::to_string(trivial) + ", dense " + std::to_string(full));
       }},
  };
}

inline std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> models_checks() {
  return {
      {"model_phi equals φ₀ for t7, s1xcy3, t3xk3 (exact)",
       [](std::uint64_t) {
         for (auto k : {ModelKind::kT7, ModelKind::kS1xCY3, ModelKind::kT3xK3})
           if (model_form<Q>(k) != phi0<Q>()) return ok_if(false, 1.0, std::string(model_tag(k)));
         return ok_if(true);
       }},
      {"derivative_rank at random Γ points equals b¹ ∈ {7, 1, 3} (exact)",
       [](std::uint64_t seed) {
         for (auto k : {ModelKind::kT7, ModelKind::kS1xCY3, ModelKind::kT3xK3}) {
           auto m = FlatModel<Q>::make(k);
           auto s = model_phi(m);
           for (std::uint64_t n = 0; n < 5; ++n) {
             auto p = gamma_sample(m, seed + n, n == 0);
             if (derivative_rank(s, p.params, m.omega_subspace).rank != static_cast<std::size_t>(m.b1))
               return ok_if(false, 0.0, std::string(model_tag(k)));
           }
         }
         return ok_if(true);
       }},
      {"Γ round trip gamma_membership ∘ twist = id mod antipode, all models (exact)",
       [](std::uint64_t seed) {
         for (auto k : {ModelKind::kT7, ModelKind::kS1xCY3, ModelKind::kT3xK3}) {
           auto m = FlatModel<Q>::make(k);
           auto s = model_phi(m);
           for (std::uint64_t n = 0; n < 10; ++n) {
             auto p = gamma_sample(m, seed + n, n % 3 == 0);
             auto q = gamma_membership(m, twist(s, p.params));
             if (!antipodally_equal(p.params, q.params)) return ok_if(false, 1.0, std::string(model_tag(k)));
           }
         }
         return ok_if(true);
       }},
      {"t7 translations: singleton orbits, covering sheet count 1 (exact, 100 translations)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto m = FlatModel<Q>::make(ModelKind::kT7);
         std::vector<Vec7<Q>> ts;
         for (int n = 0; n < 100; ++n) ts.push_back(random_vector<Q>(rng));
         for (std::uint64_t n = 0; n < 5; ++n) {
           auto p = gamma_sample(m, seed + n);
           if (translation_orbit_size(m, p, ts) != 1) return ok_if(false, 1.0);
         }
         return ok_if(true, 0.0, "sheets=1");
       }},
      {"N_f/G2 tangent dimension at the identity equals b¹ for sampled model holonomy (float)",
       [](std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         auto s = standard_structure<double>();
         std::string detail;
         for (auto k : {ModelKind::kT7, ModelKind::kS1xCY3, ModelKind::kT3xK3}) {
           auto m = FlatModel<double>::make(k);
           auto dim = coset_tangent_dim(model_holonomy_samples(k, rng), s);
           detail += std::string(model_tag(k)) + "=" + std::to_string(dim) + " ";
           if (dim != static_cast<std::size_t>(m.b1)) return ok_if(false, 0.0, detail);
         }
         return ok_if(true, 0.0, detail);
       }},
  };
}

}  // namespace selftest

/// Runs every invariant; failures and exceptions are recorded, never thrown.
inline std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> results;
  auto run_group = [&](const std::string& module, const auto& checks) {
    for (const auto& [name, fn] : checks) {
      CheckResult r{module, name};
      auto start = std::chrono::steady_clock::now();
      try {
        auto out = fn(seed);
        r.pass = out.pass;
        r.residual = out.residual;
        r.detail = out.detail;
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      results.push_back(std::move(r));
    }
  };
  run_group("exterior", selftest::exterior_checks());
  run_group("g2core", selftest::g2core_checks());
  run_group("bryant", selftest::bryant_checks());
  run_group("liegroup", selftest::lie_checks());
  run_group("models", selftest::models_checks());
  return results;
}

}  // namespace g2kit
