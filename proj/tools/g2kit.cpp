// g2kit command-line front end.
//
// Exit status: 0 success, 1 validation or assertion failure, 2 parse or I/O
// failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "g2kit/g2kit.hpp"
#include "g2kit/report.hpp"

namespace {

using namespace g2kit;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;

struct Config {
  std::string mode = "exact";
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  std::string output = "text";
  std::vector<std::string> argv;
};

struct Inputs {
  std::string text;  // concatenated raw inputs, hashed into the report

  json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kParse, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    text += ss.str();
    try {
      return json::parse(ss.str());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path + ": " + e.what());
    }
  }
};

template <Scalar S>
Report make_report(const Config& cfg, const std::string& command, const Inputs& in) {
  Report r;
  r.command = command;
  r.argv = cfg.argv;
  r.inputs_digest = hex64(fnv1a(in.text));
  r.seed = cfg.seed;
  r.mode = std::string(mode_name<S>());
  r.tol = cfg.tol;
  return r;
}

template <Scalar S>
G2Structure<S> load_structure(Inputs& in, const std::string& phi_file, double tol) {
  if (phi_file.empty()) return standard_structure<S>(tol);
  json j = in.load(phi_file);
  if (j.contains("phi")) return structure_from_json<S>(j, tol);
  return G2Structure<S>(kform_from_json<S>(j, 3), tol);
}

template <Scalar S>
double max_abs_d(const KForm<S>& a) {
  return to_double(a.max_abs());
}

template <Scalar S>
std::string norm_text(const KForm<S>& a, const G2Structure<S>& s) {
  return to_string(s.inner(a, a));
}

// --- commands ----------------------------------------------------------------

template <Scalar S>
Report cmd_decompose(const Config& cfg, const std::string& file, int degree, const std::string& phi_file) {
  Inputs in;
  if (degree != 2 && degree != 3)
    throw Error(ErrorCode::kInvalidArgument, "--degree must be 2 or 3, got " + std::to_string(degree));
  json j = in.load(file);
  auto s = load_structure<S>(in, phi_file, cfg.tol);
  KForm<S> a = kform_from_json<S>(j, degree);
  Report r = make_report<S>(cfg, "decompose", in);
  r.outputs["input"] = kform_to_json(a);
  if (degree == 2) {
    auto d = decompose2(a, s);
    KForm<S> rest = d.p7 + d.p14 - a;
    r.outputs["p7"] = kform_to_json(d.p7);
    r.outputs["p14"] = kform_to_json(d.p14);
    r.outputs["norms_squared"] = {{"p7", scalar_to_json(s.inner(d.p7, d.p7))}, {"p14", scalar_to_json(s.inner(d.p14, d.p14))}};
    r.residuals["reconstruction"] = max_abs_d(rest);
    r.lines.push_back("|p7|^2 = " + norm_text(d.p7, s) + ", |p14|^2 = " + norm_text(d.p14, s));
    r.lines.push_back("p7 = " + r.outputs["p7"].dump());
    r.lines.push_back("p14 = " + r.outputs["p14"].dump());
  } else {
    auto d = decompose3(a, s);
    KForm<S> rest = d.p1 + d.p7 + d.p27 - a;
    r.outputs["p1"] = kform_to_json(d.p1);
    r.outputs["p7"] = kform_to_json(d.p7);
    r.outputs["p27"] = kform_to_json(d.p27);
    r.outputs["norms_squared"] = {{"p1", scalar_to_json(s.inner(d.p1, d.p1))},
                                  {"p7", scalar_to_json(s.inner(d.p7, d.p7))},
                                  {"p27", scalar_to_json(s.inner(d.p27, d.p27))}};
    r.residuals["reconstruction"] = max_abs_d(rest);
    r.lines.push_back("|p1|^2 = " + norm_text(d.p1, s) + ", |p7|^2 = " + norm_text(d.p7, s) +
                      ", |p27|^2 = " + norm_text(d.p27, s));
    r.lines.push_back("p1 = " + r.outputs["p1"].dump());
    r.lines.push_back("p7 = " + r.outputs["p7"].dump());
    r.lines.push_back("p27 = " + r.outputs["p27"].dump());
  }
  double res = r.residuals["reconstruction"].get<double>();
  r.check("cli", "components sum to the input", is_exact_v<S> ? res == 0.0 : res <= cfg.tol, res);
  return r;
}

template <Scalar S>
KForm<S> parse_inline_omega(const std::string& text) {
  KForm<S> out(1);
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= kDim) throw Error(ErrorCode::kParse, "--omega takes 7 comma-separated coefficients");
    out.coeff(i++) = parse_scalar<S>(item);
  }
  if (i != kDim) throw Error(ErrorCode::kParse, "--omega takes 7 comma-separated coefficients");
  return out;
}

template <Scalar S>
Report cmd_twist(const Config& cfg, const std::string& c_text, const std::string& omega_file,
                 const std::string& omega_inline, const std::string& phi_file) {
  Inputs in;
  S c = parse_scalar<S>(c_text);
  in.text += "c=" + c_text + ";";
  KForm<S> omega(1);
  if (!omega_file.empty()) {
    omega = kform_from_json<S>(in.load(omega_file), 1);
  } else if (!omega_inline.empty()) {
    omega = parse_inline_omega<S>(omega_inline);
    in.text += "omega=" + omega_inline + ";";
  }
  auto s = load_structure<S>(in, phi_file, cfg.tol);
  Report r = make_report<S>(cfg, "twist", in);
  TwistParams<S> p(c, omega);
  r.residuals["constraint"] = to_double(constraint_residual(p, s.metric()));
  KForm<S> phit = twist(s, p);
  auto induced = metric_from_phi(phit, cfg.tol);
  double metric_res = to_double(max_abs(Matrix<S>(induced.metric.matrix() - s.metric().matrix())));
  auto d = twist_decomposed(s, p);
  r.outputs["params"] = twist_params_to_json(p);
  r.outputs["phi_twisted"] = kform_to_json(phit);
  r.outputs["p1"] = kform_to_json(d.p1);
  r.outputs["p7"] = kform_to_json(d.p7);
  r.outputs["p27"] = kform_to_json(d.p27);
  r.residuals["metric"] = metric_res;
  r.residuals["decomposition"] = max_abs_d(KForm<S>(d.p1 + d.p7 + d.p27 - phit));
  r.lines.push_back("phi_twisted = " + r.outputs["phi_twisted"].dump());
  r.check("cli", "twisted form induces the same metric", is_exact_v<S> ? metric_res == 0.0 : metric_res <= 1e-9,
          metric_res);
  r.check("cli", "twisted form induces the same orientation", induced.orientation == s.orientation());
  return r;
}

template <Scalar S>
Report cmd_recover(const Config& cfg, const std::string& file, const std::string& phi_file) {
  Inputs in;
  json j = in.load(file);
  // Accept either a bare 3-form or the twist report's "phi_twisted" output.
  if (j.contains("outputs") && j["outputs"].contains("phi_twisted")) j = j["outputs"]["phi_twisted"];
  KForm<S> phit = kform_from_json<S>(j, 3);
  auto s = load_structure<S>(in, phi_file, cfg.tol);
  Report r = make_report<S>(cfg, "recover", in);
  auto rec = recover_detailed(s, phit);
  r.outputs["params"] = twist_params_to_json(rec.params);
  r.residuals["round_trip"] = rec.residual;
  r.lines.push_back("c = " + to_string(rec.params.c));
  r.lines.push_back("omega = " + kform_to_json(rec.params.omega).dump());
  r.check("cli", "twist(recovered) reproduces the input", true, rec.residual);
  return r;
}

template <Scalar S>
Report cmd_g2check(const Config& cfg, const std::string& file, const std::string& holonomy_file) {
  Inputs in;
  Matrix<S> g = matrix_from_json<S>(in.load(file));
  std::optional<HolonomySpec<S>> h;
  if (!holonomy_file.empty()) h = holonomy_from_json<S>(in.load(holonomy_file), std::max(cfg.tol, 1e-9));
  Report r = make_report<S>(cfg, "g2check", in);
  bool orth = is_so7(g, cfg.tol);
  r.outputs["in_so7"] = orth;
  r.check("liegroup", "matrix is in SO(7)", orth);
  if (orth) {
    double res = max_abs_d(KForm<S>(act(g, phi0<S>()) - phi0<S>()));
    bool member = is_g2(g, cfg.tol);
    r.outputs["member"] = member;
    r.residuals["phi_preservation"] = res;
    r.lines.push_back(std::string("member: ") + (member ? "true" : "false"));
    r.check("liegroup", "g preserves phi0 (g in G2)", member, res);
    if (h) {
      bool nf = nf_member(g, *h, std::max(cfg.tol, 1e-8));
      r.outputs["nf_member"] = nf;
      r.lines.push_back(std::string("nf_member: ") + (nf ? "true" : "false"));
    }
  }
  return r;
}

template <Scalar S>
Report cmd_normalizer(const Config& cfg, const std::string& sub_file) {
  Inputs in;
  auto s = standard_structure<S>(cfg.tol);
  SubalgebraBasis<S> sub = g2_algebra_basis(s);
  if (!sub_file.empty()) {
    json j = in.load(sub_file);
    if (!j.is_object() || !j.contains("basis") || !j["basis"].is_array())
      throw Error(ErrorCode::kParse, "subalgebra JSON needs a \"basis\" array of matrices");
    std::vector<Matrix<S>> mats;
    for (const auto& m : j["basis"]) mats.push_back(matrix_from_json<S>(m));
    sub = SubalgebraBasis<S>(std::move(mats), std::max(cfg.tol, 1e-9));
  }
  Report r = make_report<S>(cfg, "normalizer", in);
  auto n = lie_normalizer(so7_algebra<S>(), sub);
  json basis = json::array();
  for (const auto& m : n.matrices()) basis.push_back(matrix_to_json(m));
  r.outputs["subalgebra_dim"] = sub.dim();
  r.outputs["normalizer_dim"] = n.dim();
  r.outputs["basis"] = basis;
  r.lines.push_back("dim sub = " + std::to_string(sub.dim()) + ", dim normalizer in so(7) = " + std::to_string(n.dim()));
  r.check("liegroup", "normalizer is bracket-closed", bracket_closed(n.matrices()));
  if (sub_file.empty()) r.check("liegroup", "normalizer of g2 has dimension 14", n.dim() == 14);
  return r;
}

template <Scalar S>
Report cmd_demo(const Config& cfg, const std::string& tag) {
  Inputs in;
  in.text = tag;
  ModelKind kind = parse_model(tag);
  auto m = FlatModel<S>::make(kind);
  auto s = model_phi(m, cfg.tol);
  Report r = make_report<S>(cfg, "demo", in);
  r.outputs["model"] = tag;
  r.outputs["holonomy"] = m.holonomy;
  r.outputs["b1"] = m.b1;
  r.outputs["gamma"] = "RP^" + std::to_string(m.b1) + ": (c, omega) with c^2 + |omega|^2 = 1, omega in span{dx1..dx" +
                       std::to_string(m.b1) + "}, modulo (c, omega) ~ (-c, -omega)";
  double worst = 0.0;
  bool round_trip = true, rank_ok = true;
  json samples = json::array();
  for (std::uint64_t n = 0; n < 5; ++n) {
    auto p = gamma_sample(m, cfg.seed + n, n == 0);
    auto rec = recover_detailed(s, twist(s, p.params));
    round_trip = round_trip && antipodally_equal(rec.params, p.params, 1e-9);
    worst = std::max(worst, rec.residual);
    auto dr = derivative_rank(s, p.params, m.omega_subspace);
    rank_ok = rank_ok && dr.rank == static_cast<std::size_t>(m.b1);
    samples.push_back({{"point", gamma_point_to_json(p)}, {"residual", rec.residual}, {"derivative_rank", dr.rank}});
  }
  r.outputs["samples"] = samples;
  r.residuals["round_trip"] = worst;
  r.check("models", "model phi equals phi0", model_form<S>(kind) == phi0<S>());
  r.check("models", "gamma round trip closes mod antipode", round_trip, worst);
  r.check("models", "derivative rank equals b1", rank_ok);
  std::string headline = "b1=" + std::to_string(m.b1);
  if (kind == ModelKind::kT7) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<Vec7<S>> ts;
    for (int n = 0; n < 100; ++n) ts.push_back(random_vector<S>(rng));
    auto sheets = translation_orbit_size(m, gamma_sample(m, cfg.seed), ts);
    r.outputs["sheets"] = sheets;
    r.check("models", "translation orbit is a singleton", sheets == 1);
    headline += ", sheets=" + std::to_string(sheets);
  }
  if (kind == ModelKind::kS1xCY3) {
    // exploratory: fit the twist by (3/5, (4/5)dθ) against dθ∧ω_K, Re Ω, Im Ω; reported, not asserted
    using F = KForm<S>;
    F dtheta_kahler = wedge(F::basis({1}), F(F::basis({2, 3}) + F::basis({4, 5}) + F::basis({6, 7})));
    auto omega = wedge(wedge(complex_coordinate<S>(2, 3), complex_coordinate<S>(4, 5)), complex_coordinate<S>(6, 7));
    F phit = twist(s, TwistParams<S>(from_ratio<S>(3, 5), F::basis({1}, from_ratio<S>(4, 5))));
    auto coeff = [&](const F& b) -> S { return s.inner(phit, b) / s.inner(b, b); };
    S a = coeff(dtheta_kahler), re = coeff(omega.re), im = coeff(omega.im);
    F rest = phit - dtheta_kahler * a - omega.re * re - omega.im * im;
    r.outputs["phase_rotation"] = {{"c", scalar_to_json(from_ratio<S>(3, 5))},
                                   {"omega", "(4/5) dtheta"},
                                   {"kahler_coeff", scalar_to_json(a)},
                                   {"re_Omega_coeff", scalar_to_json(re)},
                                   {"im_Omega_coeff", scalar_to_json(im)},
                                   {"residual", rest.max_abs()}};
    r.lines.push_back("twist by (3/5, (4/5)dtheta) = " + to_string(a) + " dtheta^omega_K + " + to_string(re) +
                      " Re Omega + " + to_string(im) + " Im Omega, residual " + to_string(rest.max_abs()));
  }
  r.lines.insert(r.lines.begin(), headline);
  r.lines.push_back("holonomy " + m.holonomy + ", gamma " + r.outputs["gamma"].get<std::string>());
  return r;
}

Report cmd_selftest(const Config& cfg) {
  Inputs in;
  Report r = make_report<Rational>(cfg, "selftest", in);
  r.mode = "mixed";
  r.checks = run_selftest(cfg.seed);
  r.outputs["count"] = r.checks.size();
  return r;
}

int emit(const Config& cfg, const Report& r) {
  if (cfg.output == "json")
    std::cout << r.to_json().dump(2) << "\n";
  else
    r.write_text(std::cout);
  return r.pass() ? kExitOk : kExitFail;
}

int exit_code_for(const Error& e) { return e.code() == ErrorCode::kParse ? kExitParse : kExitFail; }

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  for (int i = 0; i < argc; ++i) cfg.argv.emplace_back(argv[i]);
  if (const char* env = std::getenv("G2KIT_MODE")) cfg.mode = env;

  CLI::App app{"Computations with G2 structures on R^7"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--mode", cfg.mode, "exact|float (default from G2KIT_MODE, else exact)")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tol", cfg.tol, "float-mode tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--output", cfg.output, "json|text")->check(CLI::IsMember({"json", "text"}));

  std::string file, phi_file, omega_file, omega_inline, holonomy_file, sub_file, c_text = "1", model = "t7";
  int degree = 3;

  auto* decompose = app.add_subcommand("decompose", "split a 2- or 3-form into G2 types");
  decompose->add_option("file", file, "form JSON")->required();
  decompose->add_option("--degree", degree, "2 or 3")->required();
  decompose->add_option("--phi", phi_file, "structure 3-form JSON (default phi0)");

  auto* twist_cmd = app.add_subcommand("twist", "twist phi by (c, omega)");
  twist_cmd->add_option("--c", c_text, "c");
  auto* of = twist_cmd->add_option("--omega-file", omega_file, "omega 1-form JSON");
  auto* oi = twist_cmd->add_option("--omega", omega_inline, "omega as 7 comma-separated coefficients");
  of->excludes(oi);
  twist_cmd->add_option("--phi", phi_file, "structure 3-form JSON (default phi0)");

  auto* recover_cmd = app.add_subcommand("recover", "recover (c, omega) from a twisted form");
  recover_cmd->add_option("file", file, "3-form JSON")->required();
  recover_cmd->add_option("--phi", phi_file, "structure 3-form JSON (default phi0)");

  auto* g2check = app.add_subcommand("g2check", "test membership of a matrix in G2");
  g2check->add_option("file", file, "row-major 7x7 matrix JSON")->required();
  g2check->add_option("--holonomy", holonomy_file, "holonomy generators JSON for an N_f test");

  auto* normalizer = app.add_subcommand("normalizer", "Lie algebra normalizer in so(7)");
  normalizer->add_option("--sub", sub_file, "subalgebra basis JSON (default g2)");

  auto* demo = app.add_subcommand("demo", "flat model demonstration");
  demo->add_option("--model", model, "t7|s1xcy3|t3xk3");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }
  if (cfg.mode != "exact" && cfg.mode != "float") {
    std::cerr << "error: G2KIT_MODE must be exact or float\n";
    return kExitParse;
  }

  auto dispatch = [&]<Scalar S>() -> int {
    if (decompose->parsed()) return emit(cfg, cmd_decompose<S>(cfg, file, degree, phi_file));
    if (twist_cmd->parsed()) return emit(cfg, cmd_twist<S>(cfg, c_text, omega_file, omega_inline, phi_file));
    if (recover_cmd->parsed()) return emit(cfg, cmd_recover<S>(cfg, file, phi_file));
    if (g2check->parsed()) return emit(cfg, cmd_g2check<S>(cfg, file, holonomy_file));
    if (normalizer->parsed()) return emit(cfg, cmd_normalizer<S>(cfg, sub_file));
    if (demo->parsed()) return emit(cfg, cmd_demo<S>(cfg, model));
    if (selftest_cmd->parsed()) return emit(cfg, cmd_selftest(cfg));
    return kExitParse;
  };

  try {
    return cfg.mode == "exact" ? dispatch.operator()<Rational>() : dispatch.operator()<double>();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
