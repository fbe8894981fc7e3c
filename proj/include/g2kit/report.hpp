#pragma once

// Versioned report emitted by every CLI command.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "g2kit/json_io.hpp"
#include "g2kit/selftest.hpp"

namespace g2kit {

inline constexpr std::string_view kReportSchema = "g2kit.report/1";

struct Report {
  std::string command;
  std::vector<std::string> argv;
  std::string inputs_digest;
  std::uint64_t seed = 0;
  std::string mode;
  double tol = kDefaultTol;
  json outputs = json::object();
  json residuals = json::object();
  std::vector<CheckResult> checks;
  std::vector<std::string> lines;  // human-readable summary for text output

  void check(std::string module, std::string name, bool pass, double residual = 0.0, std::string detail = {}) {
    checks.push_back({std::move(module), std::move(name), pass, residual, std::move(detail)});
  }

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json cs = json::array();
    for (const auto& c : checks)
      cs.push_back({{"module", c.module},
                    {"name", c.name},
                    {"pass", c.pass},
                    {"residual", c.residual},
                    {"detail", c.detail},
                    {"seconds", c.seconds}});
    return {{"schema", kReportSchema},
            {"command", command},
            {"argv", argv},
            {"inputs_digest", inputs_digest},
            {"seed", seed},
            {"mode", mode},
            {"tol", tol},
            {"outputs", outputs},
            {"residuals", residuals},
            {"checks", cs},
            {"pass", pass()}};
  }

  void write_text(std::ostream& os) const {
    os << command << " (mode " << mode << ", seed " << seed << ", inputs " << inputs_digest << ")\n";
    for (const auto& l : lines) os << l << "\n";
    for (const auto& [k, v] : residuals.items()) os << "residual " << k << ": " << v.dump() << "\n";
    for (const auto& c : checks) {
      os << (c.pass ? "[PASS] " : "[FAIL] ") << c.module << ": " << c.name;
      if (!c.detail.empty()) os << " (" << c.detail << ")";
      os << "\n";
    }
    os << (pass() ? "PASS" : "FAIL") << "\n";
  }
};

}  // namespace g2kit
