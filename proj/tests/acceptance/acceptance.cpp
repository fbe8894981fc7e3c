// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criterion 9 drives the built CLI (path injected by CMake).

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"

using namespace g2kit;
using Q = Rational;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict phi0_well_formed() {
  auto induced = metric_from_phi(phi0<Q>());
  bool metric_ok = induced.metric.matrix() == Matrix<Q>::identity(7);
  bool orient_ok = induced.orientation == Orientation::kPositive;
  bool norm_ok = form_inner(phi0<Q>(), phi0<Q>()) == 7;
  // independent: B_ij from the permutation sum is 6 δ_ij for φ₀
  bool oracle_ok = oracle::g2_bilinear(oracle::phi0_literal<Q>()) == Matrix<Q>(Matrix<Q>::identity(7) * Q(6));
  return {metric_ok && orient_ok && norm_ok && oracle_ok, "g = I, orientation +1, |φ₀|² = 7"};
}

Verdict representation_dimensions() {
  auto s = standard_structure<Q>();
  Matrix<Q> op(21, 21);
  for (std::size_t j = 0; j < 21; ++j) {
    KForm<Q> beta(2);
    beta.coeff(j) = 1;
    op.set_column(j, s.star(wedge(s.phi(), beta)).coeffs());
  }
  std::size_t n7 = nullspace(Matrix<Q>(op - Matrix<Q>::identity(21) * Q(2))).cols();
  std::size_t n14 = nullspace(Matrix<Q>(op + Matrix<Q>::identity(21))).cols();
  Matrix<Q> p1(35, 35), p7(35, 35), p27(35, 35);
  for (std::size_t j = 0; j < 35; ++j) {
    KForm<Q> e(3);
    e.coeff(j) = 1;
    auto d = decompose3(e, s);
    p1.set_column(j, d.p1.coeffs());
    p7.set_column(j, d.p7.coeffs());
    p27.set_column(j, d.p27.coeffs());
  }
  std::size_t r1 = rank(p1), r7 = rank(p7), r27 = rank(p27);
  bool pass = n7 == 7 && n14 == 14 && n7 + n14 == 21 && r1 == 1 && r7 == 7 && r27 == 27;
  std::ostringstream os;
  os << "eigenspaces " << n7 << "+" << n14 << ", projector ranks " << r1 << "/" << r7 << "/" << r27;
  return {pass, os.str()};
}

Verdict pi1_law(std::mt19937_64& rng) {
  auto s = standard_structure<Q>();
  for (int n = 0; n < 100; ++n) {
    auto w = random_form<Q>(rng, 1);
    auto eta = wedge(w, s.star(wedge(w, s.star_phi())));
    if (decompose3(eta, s).p1 != s.phi() * (Q(3, 7) * form_inner(w, w))) return {false, "case " + std::to_string(n)};
  }
  return {true, "100 random ω"};
}

Verdict hodge_identity(std::mt19937_64& rng) {
  auto s = standard_structure<Q>();
  const auto& sp = s.star_phi();
  auto lhs = [&](const KForm<Q>& a) { return wedge(sp, s.star(wedge(sp, a))); };
  auto probe = KForm<Q>::basis({1});
  Q sign = lhs(probe) == s.star(probe) * Q(3) ? Q(1) : Q(-1);
  for (int n = 0; n < 100; ++n) {
    auto a = random_form<Q>(rng, 1);
    if (lhs(a) != s.star(a) * Q(3) * sign) return {false, "case " + std::to_string(n)};
  }
  return {true, "100 random α, global sign " + to_string(sign)};
}

Verdict twist_suite(std::mt19937_64& rng) {
  auto s = standard_structure<Q>();
  int forced = 0;
  for (int n = 0; n < 100; ++n) {
    bool zero = n % 10 == 0;
    auto p = sample_twist_params<Q>(rng, 7, zero);
    forced += zero;
    auto phit = twist(s, p);
    auto induced = metric_from_phi(phit);
    if (induced.metric.matrix() != s.metric().matrix() || induced.orientation != s.orientation())
      return {false, "metric changed at case " + std::to_string(n)};
    auto parts = twist_decomposed(s, p);
    auto d = decompose3(phit, s);
    if (parts.p1 != d.p1 || parts.p7 != d.p7 || parts.p27 != d.p27)
      return {false, "decomposition mismatch at case " + std::to_string(n)};
    if (form_inner(phit, phi0<Q>()) != Q(8) * p.c * p.c - Q(1)) return {false, "⟨φ̃,φ₀⟩ at case " + std::to_string(n)};
    auto rec = recover_detailed(s, phit);
    if (!antipodally_equal(rec.params, p) || rec.residual != 0.0)
      return {false, "recover at case " + std::to_string(n)};
  }
  return {true, "100 sphere points, " + std::to_string(forced) + " with c = 0"};
}

Verdict derivative_suite(std::mt19937_64& rng) {
  auto sd = standard_structure<double>();
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    auto p = sample_twist_params<double>(rng, 7, n % 10 == 0);
    worst = std::max(worst, selftest::fd_relative_error(sd, p, selftest::random_tangent(rng, p), 1e-5));
  }
  auto s = standard_structure<Q>();
  for (int n = 0; n < 50; ++n) {
    auto w0 = random_form<Q>(rng, 1), wd = random_form<Q>(rng, 1);
    auto lhs = wedge(wd, s.star(wedge(w0, s.star_phi()))) + wedge(w0, s.star(wedge(wd, s.star_phi())));
    Matrix<Q> h(7, 7);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) h(i, j) = wd.coeff(i) * w0.coeff(j) + w0.coeff(i) * wd.coeff(j);
    if (lhs != oracle::odot_definition(h, s.phi())) return {false, "odot identity at case " + std::to_string(n)};
  }
  int zero_points = 0;
  for (int n = 0; n < 20; ++n) {
    bool zero = n % 4 == 0;
    auto p = sample_twist_params<Q>(rng, 7, zero);
    zero_points += zero;
    if (derivative_rank(s, p, 7).rank != 7) return {false, "rank drop at case " + std::to_string(n)};
  }
  bool pass = worst <= 1e-6;
  return {pass, "max FD relative error " + to_string(worst) + ", rank 7 at 20 points (" +
                    std::to_string(zero_points) + " with c = 0)"};
}

Verdict lie_suite() {
  auto s = standard_structure<Q>();
  auto g2 = g2_algebra_basis(s);
  auto so7 = so7_algebra<Q>();
  bool closed = bracket_closed(g2.matrices());
  std::size_t normalizer = lie_normalizer(so7, g2).dim();
  // kernel of A ↦ infinitesimal_action(A) on so(7)
  Matrix<Q> images(35, so7.dim());
  for (std::size_t k = 0; k < so7.dim(); ++k) images.set_column(k, infinitesimal_action(so7[k], s).coeffs());
  Matrix<Q> kernel = nullspace(images);
  std::vector<Matrix<Q>> kernel_mats;
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    Matrix<Q> a(7, 7);
    for (std::size_t k = 0; k < so7.dim(); ++k) a += so7[k] * kernel(k, c);
    kernel_mats.push_back(a);
  }
  auto both = kernel_mats;
  both.insert(both.end(), g2.matrices().begin(), g2.matrices().end());
  bool kernel_is_g2 = kernel_mats.size() == 14 && span_dimension(both) == 14;
  std::size_t coset = coset_tangent_dim(HolonomySpec<Q>::trivial(), s);
  bool pass = g2.dim() == 14 && closed && normalizer == 14 && kernel_is_g2 && coset == 7;
  std::ostringstream os;
  os << "dim g2 " << g2.dim() << (closed ? " closed" : " NOT closed") << ", normalizer " << normalizer << ", kernel "
     << kernel_mats.size() << ", coset tangent " << coset;
  return {pass, os.str()};
}

Verdict models_suite() {
  std::ostringstream os;
  bool pass = true;
  auto literal = oracle::phi0_literal<Q>();
  for (auto k : {ModelKind::kT7, ModelKind::kS1xCY3, ModelKind::kT3xK3}) {
    auto m = FlatModel<Q>::make(k);
    auto s = model_phi(m);
    bool equal = s.phi() == literal;
    std::size_t r = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      r = derivative_rank(s, gamma_sample(m, seed, seed == 1).params, m.omega_subspace).rank;
      if (r != static_cast<std::size_t>(m.b1)) break;
    }
    pass = pass && equal && r == static_cast<std::size_t>(m.b1);
    os << model_tag(k) << (equal ? " =φ₀" : " ≠φ₀") << " rank " << r << "; ";
  }
  auto t7 = FlatModel<Q>::make(ModelKind::kT7);
  std::mt19937_64 rng(9);
  std::vector<Vec7<Q>> ts;
  for (int n = 0; n < 20; ++n) ts.push_back(random_vector<Q>(rng));
  std::size_t sheets = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) sheets = std::max(sheets, translation_orbit_size(t7, gamma_sample(t7, seed), ts));
  pass = pass && sheets == 1;
  os << "t7 sheets " << sheets;
  return {pass, os.str()};
}

int run(const std::string& cmd) {
  int status = std::system((cmd + " 2> /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict cli_contract() {
  const std::string cli = G2KIT_CLI_PATH;
  auto start = std::chrono::steady_clock::now();
  std::string report_path = (std::filesystem::temp_directory_path() / "g2kit_acceptance_report.json").string();
  int selftest = run(cli + " selftest --output json > " + report_path);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t checks = 0;
  bool all_modules = false;
  try {
    std::ifstream in(report_path);
    auto report = json::parse(in);
    std::set<std::string> modules;
    for (const auto& c : report["checks"]) {
      ++checks;
      modules.insert(c["module"].get<std::string>());
    }
    all_modules = modules == std::set<std::string>{"exterior", "g2core", "bryant", "liegroup", "models"};
  } catch (const std::exception&) {
  }
  std::filesystem::remove(report_path);

  std::string bad_path = (std::filesystem::temp_directory_path() / "g2kit_acceptance_bad.json").string();
  std::ofstream(bad_path) << "{\"degree\": 3, \"entries\": [";
  int malformed = run(cli + " recover " + bad_path + " > /dev/null");
  std::filesystem::remove(bad_path);
  int violating = run(cli + " twist --c 1 --omega 1,0,0,0,0,0,0 > /dev/null");

  bool pass = selftest == 0 && seconds < 60.0 && all_modules && checks > 0 && malformed == 2 && violating == 1;
  std::ostringstream os;
  os << "selftest exit " << selftest << " in " << to_string(seconds) << " s (" << checks << " checks"
     << (all_modules ? ", all modules" : ", modules missing") << "), malformed exit " << malformed
     << ", constraint violation exit " << violating;
  return {pass, os.str()};
}

}  // namespace

int main() {
  std::mt19937_64 rng(20260101);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"phi0 well-formedness", [] { return phi0_well_formed(); }},
      {"representation dimensions", [] { return representation_dimensions(); }},
      {"pi1 law", [&] { return pi1_law(rng); }},
      {"Hodge identity", [&] { return hodge_identity(rng); }},
      {"twist suite", [&] { return twist_suite(rng); }},
      {"derivative suite", [&] { return derivative_suite(rng); }},
      {"Lie suite", [] { return lie_suite(); }},
      {"models suite", [] { return models_suite(); }},
      {"CLI contract", [] { return cli_contract(); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " (" << v.detail
              << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
