#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gerbe/report.hpp"
#include "gerbe/variation.hpp"

namespace gerbe {

struct CheckResult {
  std::string id;    // "<fixture or instance>/<check>"
  std::string kind;  // "algebraic" or "integration"
  double value = 0.0;
  double gate = 0.0;
  bool at_least = false;  // pass when value >= gate instead of value <= gate
  bool pass = false;
  std::string note;
};

struct SuiteOptions {
  std::vector<std::string> fixtures;
  TransportConfig cfg;
  FDConfig fd;
  std::uint64_t seed = 1;
  int n_points = 100;
  int axiom_samples = 1000;
  int interchange_samples = 50;
};

struct SuiteReport {
  std::vector<CheckResult> checks;  // sorted by id
  bool pass() const;
  int failures() const;
};

// Integration-bound gates scale with cfg.tol_target / 1e-6; algebraic gates
// are fixed.  Throws ConfigError on an empty fixture list or an unknown name.
SuiteReport run_suite(const SuiteOptions& opt);

Json report_json(const SuiteReport& r);

// The bundled fixtures run by default.
std::vector<std::string> default_suite_fixtures();

}  // namespace gerbe
