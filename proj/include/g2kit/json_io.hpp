#pragma once

// JSON encodings for forms, matrices, holonomy specs, twist parameters and
// structures. Exact mode writes and requires "p/q" strings.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "g2kit/bryant.hpp"
#include "g2kit/lie.hpp"
#include "g2kit/models.hpp"

namespace g2kit {

using json = nlohmann::json;

template <Scalar S>
constexpr std::string_view mode_name() {
  return is_exact_v<S> ? "exact" : "float";
}

template <Scalar S>
json scalar_to_json(const S& x) {
  if constexpr (is_exact_v<S>) {
    return to_string(x);
  } else {
    return x;
  }
}

template <Scalar S>
S scalar_from_json(const json& j) {
  if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
  if constexpr (is_exact_v<S>) {
    throw Error(ErrorCode::kParse, "exact mode requires \"p/q\" strings, got " + j.dump());
  } else {
    if (!j.is_number()) throw Error(ErrorCode::kParse, "expected a number, got " + j.dump());
    return j.get<double>();
  }
}

template <Scalar S>
json kform_to_json(const KForm<S>& a) {
  json entries = json::array();
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (is_zero(a.coeff(p), 0.0)) continue;
    entries.push_back({{"idx", a.index_at(p).indices()}, {"coeff", scalar_to_json(a.coeff(p))}});
  }
  return {{"degree", a.degree()}, {"entries", entries}};
}

/// Parses a form; `expected_degree` < 0 accepts any degree.
template <Scalar S>
KForm<S> kform_from_json(const json& j, int expected_degree = -1) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("entries"))
    throw Error(ErrorCode::kParse, "form JSON needs \"degree\" and \"entries\"");
  if (!j["degree"].is_number_integer()) throw Error(ErrorCode::kParse, "\"degree\" must be an integer");
  int degree = j["degree"].get<int>();
  if (degree < 0 || degree > kDim) throw Error(ErrorCode::kParse, "\"degree\" must lie in 0..7");
  if (expected_degree >= 0 && degree != expected_degree)
    throw Error(ErrorCode::kInvalidArgument,
                "expected a " + std::to_string(expected_degree) + "-form, got degree " + std::to_string(degree));
  if (!j["entries"].is_array()) throw Error(ErrorCode::kParse, "\"entries\" must be an array");
  KForm<S> out(degree);
  std::vector<bool> seen(out.size(), false);
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("idx") || !e.contains("coeff") || !e["idx"].is_array())
      throw Error(ErrorCode::kParse, "each entry needs \"idx\" (array) and \"coeff\"");
    std::vector<int> idx;
    for (const auto& i : e["idx"]) {
      if (!i.is_number_integer()) throw Error(ErrorCode::kParse, "\"idx\" entries must be integers");
      idx.push_back(i.get<int>());
    }
    if (static_cast<int>(idx.size()) != degree)
      throw Error(ErrorCode::kParse, "\"idx\" length does not match the degree");
    MultiIndex mi;
    try {
      mi = MultiIndex(idx);
    } catch (const Error& err) {
      throw Error(ErrorCode::kParse, err.what());
    }
    auto pos = static_cast<std::size_t>(detail::tables().position[mi.mask()]);
    if (seen[pos]) throw Error(ErrorCode::kParse, "duplicate index " + to_string(mi));
    seen[pos] = true;
    out.coeff(pos) = scalar_from_json<S>(e["coeff"]);
  }
  return out;
}

template <Scalar S>
json matrix_to_json(const Matrix<S>& m) {
  json out = json::array();
  for (const auto& x : m.data()) out.push_back(scalar_to_json(x));
  return out;
}

template <Scalar S>
Matrix<S> matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(kDim * kDim))
    throw Error(ErrorCode::kParse, "matrix JSON must be a row-major array of 49 scalars");
  Matrix<S> m(kDim, kDim);
  for (std::size_t i = 0; i < j.size(); ++i) m(i / kDim, i % kDim) = scalar_from_json<S>(j[i]);
  return m;
}

template <Scalar S>
json holonomy_to_json(const HolonomySpec<S>& h) {
  json gens = json::array();
  for (const auto& g : h.generators()) gens.push_back(matrix_to_json(g));
  return {{"generators", gens}};
}

template <Scalar S>
HolonomySpec<S> holonomy_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
    throw Error(ErrorCode::kParse, "holonomy JSON needs a \"generators\" array");
  std::vector<Matrix<S>> gens;
  for (const auto& g : j["generators"]) gens.push_back(matrix_from_json<S>(g));
  return HolonomySpec<S>(std::move(gens), tol);
}

template <Scalar S>
json twist_params_to_json(const TwistParams<S>& p) {
  return {{"c", scalar_to_json(p.c)}, {"omega", kform_to_json(p.omega)}};
}

template <Scalar S>
TwistParams<S> twist_params_from_json(const json& j) {
  if (!j.is_object() || !j.contains("c") || !j.contains("omega"))
    throw Error(ErrorCode::kParse, "twist parameter JSON needs \"c\" and \"omega\"");
  return {scalar_from_json<S>(j["c"]), kform_from_json<S>(j["omega"], 1)};
}

template <Scalar S>
json gamma_point_to_json(const GammaPoint<S>& p) {
  json out = twist_params_to_json(p.params);
  out["model"] = std::string(model_tag(p.model));
  return out;
}

template <Scalar S>
GammaPoint<S> gamma_point_from_json(const json& j) {
  if (!j.contains("model") || !j["model"].is_string()) throw Error(ErrorCode::kParse, "gamma point needs \"model\"");
  ModelKind kind;
  try {
    kind = parse_model(j["model"].get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return {kind, twist_params_from_json<S>(j)};
}

/// FNV-1a over a canonical text rendering; stable across runs and builds.
inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <Scalar S>
std::string digest(const Matrix<S>& m) {
  std::string text;
  for (const auto& x : m.data()) text += to_string(x) + ";";
  return hex64(fnv1a(text));
}

template <Scalar S>
std::string digest(const KForm<S>& a) {
  return hex64(fnv1a(kform_to_json(a).dump()));
}

template <Scalar S>
json structure_to_json(const G2Structure<S>& s) {
  return {{"phi", kform_to_json(s.phi())},
          {"mode", std::string(mode_name<S>())},
          {"metric_hash", digest(s.metric().matrix())},
          {"vol_hash", digest(s.vol())}};
}

/// Rebuilds a structure from its 3-form; metric and volume are regenerated
/// and compared with the stored hashes when present.
template <Scalar S>
G2Structure<S> structure_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("phi")) throw Error(ErrorCode::kParse, "structure JSON needs \"phi\"");
  if (j.contains("mode") && j["mode"] != std::string(mode_name<S>()))
    throw Error(ErrorCode::kParse, "structure was saved in " + j["mode"].dump() + " mode");
  G2Structure<S> s(kform_from_json<S>(j["phi"], 3), tol);
  if (j.contains("metric_hash") && j["metric_hash"] != digest(s.metric().matrix()))
    throw Error(ErrorCode::kMetricMismatch, "stored metric hash does not match the regenerated metric");
  if (j.contains("vol_hash") && j["vol_hash"] != digest(s.vol()))
    throw Error(ErrorCode::kMetricMismatch, "stored volume hash does not match the regenerated volume form");
  return s;
}

}  // namespace g2kit
