#include "gerbe/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gerbe/fixtures.hpp"
#include "gerbe/suite.hpp"

namespace gerbe {

namespace {

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  return s;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T convert(const std::string& key, const std::string& raw) {
  std::istringstream is(trim(raw));
  T v{};
  is >> v;
  if (is.fail() || !is.eof()) throw ConfigError("bad value for " + key + ": '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + raw + "'");
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if ((ch == ',' || ch == ';') && depth == 0) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(convert<double>("list entry", item));
  return out;
}

void ScenarioConfig::validate() const {
  GerbeCocycle c = make_fixture(fixture);
  if (!crossed_module.empty()) {
    make_crossed_module(crossed_module);
    if (c.cm->name() != crossed_module)
      throw ConfigError("fixture " + fixture + " uses " + c.cm->name() + ", not " + crossed_module);
  }
  if (!surface.empty()) make_surface(surface);
  if (!corrupt.empty()) {
    static const std::set<std::string> kinds = {"f", "g", "a", "B"};
    if (!kinds.count(corrupt)) throw ConfigError("--corrupt must be one of f, g, a, B");
    gerbe::corrupt(c, corrupt);  // throws when the fixture has no room for it
  }
  if (grid_mode != "auto" && grid_mode != "explicit") throw ConfigError("grid mode must be auto or explicit");
  if (grid_mode == "explicit") {
    if (grid_n < 1 || grid_m < 1) throw ConfigError("grid n and m must be at least 1");
    if (static_cast<int>(assignment.size()) != grid_n * grid_m)
      throw ConfigError("grid assignment needs n * m entries");
    for (int a : assignment)
      if (a < 0 || a >= c.n()) throw ConfigError("grid assignment names a chart outside the cover");
  }
  if (max_depth < 1 || max_depth > 12) throw ConfigError("grid max_depth must lie in [1, 12]");
  if (n_points < 1) throw ConfigError("n_points must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  transport.validate();
  fd.validate();
  for (const auto& f : suite_fixtures) make_fixture(f);
}

std::string ScenarioConfig::canonical() const {
  std::ostringstream os;
  auto list = [](const auto& v, auto fmt) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(v[k]);
    return s;
  };
  os << "crossed_module = " << crossed_module << "\n";
  os << "fixture = " << fixture << "\n";
  os << "surface = " << surface << "\n";
  os << "corrupt = " << corrupt << "\n";
  os << "grid.mode = " << grid_mode << "\n";
  os << "grid.n = " << grid_n << "\n";
  os << "grid.m = " << grid_m << "\n";
  os << "grid.assignment = " << list(assignment, [](int a) { return std::to_string(a); }) << "\n";
  os << "grid.max_depth = " << max_depth << "\n";
  os << "transport.ode_steps_per_unit = " << transport.ode_steps_per_unit << "\n";
  os << "transport.quadrature_points = " << transport.quadrature_points << "\n";
  os << "transport.tol_target = " << num(transport.tol_target) << "\n";
  os << "transport.h_fd = " << num(transport.h_fd) << "\n";
  os << "fd.steps = " << list(fd.steps, num) << "\n";
  os << "fd.richardson = " << (fd.richardson ? "true" : "false") << "\n";
  os << "run.seed = " << seed << "\n";
  os << "run.n_points = " << n_points << "\n";
  os << "run.fixtures = " << (suite_fixtures_set ? list(suite_fixtures, [](const std::string& s) { return s; }) : "default")
     << "\n";
  // output_dir is left out so that moving the output does not change the hash.
  return os.str();
}

std::string ScenarioConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json ScenarioConfig::to_json() const {
  Json j;
  j["crossed_module"] = crossed_module;
  j["fixture"] = fixture;
  j["surface"] = surface;
  j["corrupt"] = corrupt;
  Json g;
  g["mode"] = grid_mode;
  g["n"] = grid_n;
  g["m"] = grid_m;
  g["assignment"] = assignment;
  g["max_depth"] = max_depth;
  j["grid"] = g;
  j["transport"] = config_json(transport);
  j["fd"] = config_json(fd);
  j["seed"] = seed;
  j["n_points"] = n_points;
  j["fixtures"] = suite_fixtures_set ? Json(suite_fixtures) : Json("default");
  j["hash"] = hash();
  return j;
}

ScenarioConfig parse_scenario(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  static const std::map<std::string, std::set<std::string>> known = {
      {"scenario", {"crossed_module", "fixture", "surface", "corrupt"}},
      {"grid", {"mode", "n", "m", "assignment", "max_depth"}},
      {"transport", {"ode_steps_per_unit", "quadrature_points", "tol_target", "h_fd"}},
      {"fd", {"steps", "richardson"}},
      {"run", {"seed", "output_dir", "n_points", "fixtures"}},
  };
  ScenarioConfig cfg;
  for (const auto& [section, body] : tree) {
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown config key " + section + "." + key);
      const std::string v = node.get_value<std::string>();
      const std::string k = section + "." + key;
      if (k == "scenario.crossed_module") cfg.crossed_module = trim(v);
      else if (k == "scenario.fixture") cfg.fixture = trim(v);
      else if (k == "scenario.surface") cfg.surface = trim(v);
      else if (k == "scenario.corrupt") cfg.corrupt = trim(v);
      else if (k == "grid.mode") cfg.grid_mode = trim(v);
      else if (k == "grid.n") cfg.grid_n = convert<int>(k, v);
      else if (k == "grid.m") cfg.grid_m = convert<int>(k, v);
      else if (k == "grid.assignment") {
        cfg.assignment.clear();
        for (const auto& a : split_list(v)) cfg.assignment.push_back(convert<int>(k, a));
      } else if (k == "grid.max_depth") cfg.max_depth = convert<int>(k, v);
      else if (k == "transport.ode_steps_per_unit") cfg.transport.ode_steps_per_unit = convert<int>(k, v);
      else if (k == "transport.quadrature_points") cfg.transport.quadrature_points = convert<int>(k, v);
      else if (k == "transport.tol_target") cfg.transport.tol_target = convert<double>(k, v);
      else if (k == "transport.h_fd") cfg.transport.h_fd = convert<double>(k, v);
      else if (k == "fd.steps") cfg.fd.steps = parse_doubles(v);
      else if (k == "fd.richardson") cfg.fd.richardson = parse_bool(k, v);
      else if (k == "run.seed") cfg.seed = convert<std::uint64_t>(k, v);
      else if (k == "run.output_dir") cfg.output_dir = trim(v);
      else if (k == "run.n_points") cfg.n_points = convert<int>(k, v);
      else if (k == "run.fixtures") {
        cfg.suite_fixtures = split_list(v);
        cfg.suite_fixtures_set = true;
      }
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_scenario(in);
}

std::string output_stem(const std::string& command, const std::string& fixture, const ScenarioConfig& cfg) {
  std::string fx;
  for (char ch : fixture) fx += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  while (!fx.empty() && fx.back() == '_') fx.pop_back();
  return command + "_" + fx + "_seed" + std::to_string(cfg.seed) + "_" + cfg.hash();
}

}  // namespace gerbe
