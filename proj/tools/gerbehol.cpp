// Command-line harness: gerbehol {validate|holonomy|derivative|suite} [flags]

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gerbe/scenario.hpp"

int main(int argc, char** argv) {
  using namespace gerbe;
  CLI::App app{"Surface holonomy of non-abelian gerbes: validation, assembly and derivative checks"};
  app.require_subcommand(1);

  std::string config_path, fd_steps, out_dir, corrupt, fixture;
  std::optional<std::uint64_t> seed;
  std::optional<int> ode_steps, quad_points;
  std::optional<double> tol_target;
  app.add_option("--config", config_path, "INI scenario file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--ode-steps", ode_steps, "ODE steps per unit parameter length (>= 16)");
  app.add_option("--quad-points", quad_points, "Gauss points per panel of the inner integral");
  app.add_option("--fd-steps", fd_steps, "comma-separated decreasing finite-difference steps");
  app.add_option("--tol-target", tol_target, "target-relation gate");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--corrupt", corrupt, "negative control: break one cocycle relation")
      ->check(CLI::IsMember({"f", "g", "a", "B"}));
  app.add_option("--fixture", fixture, "cocycle fixture, overriding the config");

  for (const char* name : {"validate", "holonomy", "derivative", "suite"}) {
    static const std::map<std::string, std::string> help = {
        {"validate", "check the cocycle relations of a fixture"},
        {"holonomy", "assemble the global surface holonomy"},
        {"derivative", "compare the derivative formula with finite differences"},
        {"suite", "run every check over a list of fixtures"},
    };
    app.add_subcommand(name, help.at(name))->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_scenario(config_path);
    if (!fixture.empty()) cfg.fixture = fixture;
    if (seed) cfg.seed = *seed;
    if (ode_steps) cfg.transport.ode_steps_per_unit = *ode_steps;
    if (quad_points) cfg.transport.quadrature_points = *quad_points;
    if (tol_target) cfg.transport.tol_target = *tol_target;
    if (!fd_steps.empty()) cfg.fd.steps = parse_doubles(fd_steps);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!corrupt.empty()) cfg.corrupt = corrupt;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, std::cout, std::cerr);
}
