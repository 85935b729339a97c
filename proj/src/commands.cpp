#include <filesystem>
#include <fstream>
#include <ostream>

#include "gerbe/fixtures.hpp"
#include "gerbe/probes.hpp"
#include "gerbe/scenario.hpp"
#include "gerbe/suite.hpp"

namespace gerbe {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

GerbeCocycle scenario_cocycle(const ScenarioConfig& cfg) {
  GerbeCocycle c = make_fixture(cfg.fixture);
  if (!cfg.corrupt.empty()) c = corrupt(c, cfg.corrupt);
  c.h_fd = cfg.transport.h_fd;
  return c;
}

SquareFamily scenario_family(const ScenarioConfig& cfg, const GerbeCocycle& c) {
  return make_surface(cfg.surface.empty() ? fixture_probes(c, cfg.fixture).surface : cfg.surface);
}

GridAssignment scenario_grid(const ScenarioConfig& cfg, const GerbeCocycle& c, const SquareMap& sigma) {
  if (cfg.grid_mode == "auto") return find_grid(sigma, c.cover, cfg.max_depth);
  GridAssignment g;
  g.n = cfg.grid_n;
  g.m = cfg.grid_m;
  g.assign = cfg.assignment;
  ContainmentDiagnostic d = check_assignment(sigma, c.cover, g);
  if (!d.ok)
    throw ContainmentError("explicit grid " + g.describe() + " is not admissible: worst cell (" +
                           std::to_string(d.worst_k) + ", " + std::to_string(d.worst_l) +
                           ") depth " + std::to_string(d.worst_depth));
  return g;
}

Json envelope(const std::string& command, const ScenarioConfig& cfg) {
  Json j;
  j["command"] = command;
  j["config"] = cfg.to_json();
  return j;
}

std::filesystem::path out_path(const ScenarioConfig& cfg, const std::string& stem, const std::string& ext) {
  return std::filesystem::path(cfg.output_dir) / (stem + ext);
}

}  // namespace

int cmd_validate(const ScenarioConfig& cfg, std::ostream& log) {
  cfg.validate();
  GerbeCocycle c = scenario_cocycle(cfg);
  ValidationReport r = validate_gerbe(c, cfg.n_points, cfg.seed);
  Json j = envelope("validate", cfg);
  j["report"] = report_json(r);
  j["pass"] = r.pass();
  auto path = out_path(cfg, output_stem("validate", cfg.fixture, cfg), ".json");
  write_file(path, dump_json(j));
  log << "validate " << cfg.fixture << (cfg.corrupt.empty() ? "" : " (corrupt " + cfg.corrupt + ")") << ": "
      << (r.pass() ? "pass" : "FAIL");
  for (const auto& f : r.failures()) log << " " << f;
  log << "\nreport: " << path.string() << "\n";
  return r.pass() ? kExitPass : kExitGateFailure;
}

int cmd_holonomy(const ScenarioConfig& cfg, std::ostream& log) {
  cfg.validate();
  GerbeCocycle c = scenario_cocycle(cfg);
  SquareMap sigma = scenario_family(cfg, c).at(0.0);
  GridAssignment grid = scenario_grid(cfg, c, sigma);
  GlobalHolonomy h = assemble_global_hol(c, sigma, grid, cfg.transport);
  const bool pass = h.target_residual <= cfg.transport.tol_target;
  Json j = envelope("holonomy", cfg);
  j["result"] = report_json(h);
  j["pass"] = pass;
  auto path = out_path(cfg, output_stem("holonomy", cfg.fixture, cfg), ".json");
  write_file(path, dump_json(j));
  log << "holonomy " << cfg.fixture << " on " << grid.describe() << ": target residual " << h.target_residual
      << (pass ? " (pass)" : " (FAIL)") << "\nreport: " << path.string() << "\n";
  return pass ? kExitPass : kExitGateFailure;
}

int cmd_derivative(const ScenarioConfig& cfg, std::ostream& log) {
  cfg.validate();
  GerbeCocycle c = scenario_cocycle(cfg);
  SquareFamily fam = scenario_family(cfg, c);
  GridAssignment grid = scenario_grid(cfg, c, fam.at(0.0));
  DerivativeCheck d = check_derivative(c, fam, grid, cfg.transport, cfg.fd);
  // A family whose derivative vanishes passes on the relative error alone.
  const bool degenerate = std::max(d.fd.derivative.norm(), d.formula.total.norm()) <= 1e-8;
  const bool order_ok = degenerate || d.fd.central_order >= 1.8;
  const bool pass = d.rel_err <= 1e-3 && order_ok;
  Json j = envelope("derivative", cfg);
  j["grid"] = grid_json(grid);
  j["result"] = report_json(d);
  j["degenerate"] = degenerate;
  j["pass"] = pass;
  const std::string stem = output_stem("derivative", cfg.fixture, cfg);
  auto path = out_path(cfg, stem, ".json");
  auto csv = out_path(cfg, stem, "_convergence.csv");
  write_file(path, dump_json(j));
  write_file(csv, convergence_csv(d.fd.table));
  log << "derivative " << cfg.fixture << " on " << grid.describe() << ": rel err " << d.rel_err << ", order "
      << d.fd.central_order << (pass ? " (pass)" : " (FAIL)") << "\nreport: " << path.string()
      << "\nconvergence: " << csv.string() << "\n";
  return pass ? kExitPass : kExitGateFailure;
}

int cmd_suite(const ScenarioConfig& cfg, std::ostream& log) {
  cfg.validate();
  SuiteOptions opt;
  opt.fixtures = cfg.suite_fixtures_set ? cfg.suite_fixtures : default_suite_fixtures();
  opt.cfg = cfg.transport;
  opt.fd = cfg.fd;
  opt.seed = cfg.seed;
  opt.n_points = cfg.n_points;
  SuiteReport r = run_suite(opt);
  Json j = envelope("suite", cfg);
  j["result"] = report_json(r);
  auto path = out_path(cfg, output_stem("suite", "all", cfg), ".json");
  write_file(path, dump_json(j));
  for (const auto& ch : r.checks)
    if (!ch.pass) log << "FAIL " << ch.id << " value " << ch.value << " gate " << ch.gate << " " << ch.note << "\n";
  log << "suite: " << (r.checks.size() - r.failures()) << "/" << r.checks.size() << " checks pass\nreport: "
      << path.string() << "\n";
  return r.pass() ? kExitPass : kExitGateFailure;
}

int run_command(const std::string& command, const ScenarioConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    if (command == "validate") return cmd_validate(cfg, log);
    if (command == "holonomy") return cmd_holonomy(cfg, log);
    if (command == "derivative") return cmd_derivative(cfg, log);
    if (command == "suite") return cmd_suite(cfg, log);
    err << "unknown command: " << command << "\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const GridNotFound& e) {
    err << "grid not found: " << e.what() << "\n";
    return kExitGridFailure;
  } catch (const GridDrift& e) {
    err << "grid drift: " << e.what() << "\n";
    return kExitGridFailure;
  } catch (const ContainmentError& e) {
    err << "containment: " << e.what() << "\n";
    return kExitGridFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitGateFailure;
  }
}

}  // namespace gerbe
