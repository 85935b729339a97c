#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gerbe/report.hpp"
#include "gerbe/transport.hpp"
#include "gerbe/variation.hpp"

namespace gerbe {

// Everything a CLI run depends on.  Loaded from an INI file with sections
// [scenario], [grid], [transport], [fd] and [run]; command-line flags override.
struct ScenarioConfig {
  std::string crossed_module;  // optional; must match the fixture's instance when set
  std::string fixture = "heisenberg_torus4";
  std::string surface;         // empty: the fixture's standard family
  std::string corrupt;         // "", "f", "g", "a" or "B"
  std::string grid_mode = "auto";  // "auto" or "explicit"
  int grid_n = 1, grid_m = 1;
  std::vector<int> assignment;
  int max_depth = 6;
  TransportConfig transport;
  FDConfig fd;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int n_points = 200;
  // Fixtures of the suite command; the bundled list unless [run] fixtures is given.
  std::vector<std::string> suite_fixtures;
  bool suite_fixtures_set = false;

  // Throws ConfigError on unknown names, bad knobs or an inconsistent grid.
  void validate() const;
  // One "key = value" line per field in fixed order, numbers as %.17g.
  std::string canonical() const;
  // 16 hex digits of the FNV-1a hash of canonical().
  std::string hash() const;
  Json to_json() const;
};

// Throws ConfigError on a missing file, a parse error or an unknown key.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in);

// Splits on commas outside parentheses and trims blanks.
std::vector<std::string> split_list(const std::string& s);
std::vector<double> parse_doubles(const std::string& s);

// Exit codes of the command-line tool.
enum ExitCode { kExitPass = 0, kExitGateFailure = 1, kExitConfigError = 2, kExitGridFailure = 3 };

// Each command writes its report into cfg.output_dir under a name embedding
// the fixture, the seed and the config hash, prints a summary to `log` and
// returns an exit code.  ConfigError and grid failures propagate; see run_command.
int cmd_validate(const ScenarioConfig& cfg, std::ostream& log);
int cmd_holonomy(const ScenarioConfig& cfg, std::ostream& log);
int cmd_derivative(const ScenarioConfig& cfg, std::ostream& log);
int cmd_suite(const ScenarioConfig& cfg, std::ostream& log);

// Dispatches by name and maps exceptions to exit codes: ConfigError -> 2,
// GridNotFound / GridDrift / ContainmentError -> 3, any other error -> 1.
int run_command(const std::string& command, const ScenarioConfig& cfg, std::ostream& log, std::ostream& err);

// "<command>_<fixture>_seed<seed>_<hash>" with non-alphanumerics replaced by '_'.
std::string output_stem(const std::string& command, const std::string& fixture, const ScenarioConfig& cfg);

}  // namespace gerbe
