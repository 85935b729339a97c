#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gerbe/scenario.hpp"
#include "gerbe/suite.hpp"

using namespace gerbe;
namespace fs = std::filesystem;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gerbehol_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& cmd, const ScenarioConfig& cfg) {
  std::ostringstream log, err;
  return run_command(cmd, cfg, log, err);
}

}  // namespace

TEST_CASE("scenario files parse every section") {
  ScenarioConfig c = parse(R"([scenario]
fixture = abelian_sphere(2)
surface = sphere_of_radius(1.1)
[grid]
mode = explicit
n = 2
m = 2
assignment = 4, 4, 5, 5
[transport]
ode_steps_per_unit = 64
tol_target = 1e-7
[fd]
steps = 0.02, 0.01
richardson = false
[run]
seed = 42
output_dir = results
fixtures = trivial, abelian_sphere(1)
)");
  CHECK(c.fixture == "abelian_sphere(2)");
  CHECK(c.grid_mode == "explicit");
  CHECK(c.assignment == std::vector<int>{4, 4, 5, 5});
  CHECK(c.transport.ode_steps_per_unit == 64);
  CHECK(c.transport.tol_target == 1e-7);
  CHECK(c.fd.steps == std::vector<double>{0.02, 0.01});
  CHECK_FALSE(c.fd.richardson);
  CHECK(c.seed == 42);
  CHECK(c.output_dir == "results");
  CHECK(c.suite_fixtures == std::vector<std::string>{"trivial", "abelian_sphere(1)"});
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown sections, keys and bad values are config errors") {
  CHECK_THROWS_AS(parse("[nope]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\ncolour = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nn = two\n"), ConfigError);
  CHECK_THROWS_AS(parse("[fd]\nrichardson = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse("not an ini line\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\nfixture = nope\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\ncorrupt = q\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\ncrossed_module = su2_ad\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nmode = explicit\nn = 2\nm = 1\nassignment = 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[fd]\nsteps = 0.01, 0.02\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("split_list respects parentheses") {
  CHECK(split_list("a, f(1, 2) ; b") == std::vector<std::string>{"a", "f(1, 2)", "b"});
  CHECK(split_list(" ").empty());
  CHECK(parse_doubles("0.5,1e-3") == std::vector<double>{0.5, 1e-3});
}

TEST_CASE("config hash is FNV-1a of the canonical text and ignores output_dir") {
  ScenarioConfig c;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : c.canonical()) h = (h ^ ch) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  CHECK(c.hash() == buf);
  CHECK(c.hash() == "287fa6dd1d74b410");
  ScenarioConfig moved = c;
  moved.output_dir = "elsewhere";
  CHECK(moved.hash() == c.hash());
  ScenarioConfig reseeded = c;
  reseeded.seed = 2;
  CHECK(reseeded.hash() != c.hash());
  CHECK(output_stem("validate", "abelian_sphere(1)", c) == "validate_abelian_sphere_1_seed1_" + c.hash());
}

TEST_CASE("JSON numbers print with 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  j["n"] = std::numeric_limits<double>::quiet_NaN();
  j["a"] = {1.0, 2.5};
  j["i"] = 3;
  CHECK(dump_json(j) == "{\n  \"x\": 0.10000000000000001,\n  \"n\": null,\n  \"a\": [1, 2.5],\n  \"i\": 3\n}\n");
  Mat m(1, 1);
  m(0, 0) = cd(1.5, -2.0);
  Json mj = matrix_json(m);
  CHECK(mj["re"][0][0] == 1.5);
  CHECK(mj["im"][0][0] == -2.0);
}

TEST_CASE("convergence CSV layout") {
  std::vector<ConvergenceRow> rows{{0.02, 1.0, 1.0, 0.5, 0.25, 0.0}};
  std::string csv = convergence_csv(rows);
  CHECK(csv.rfind("step,fd_norm,formula_norm,abs_err,rel_err,est_order\n", 0) == 0);
  CHECK(csv.find("0.02,1,1,0.5,0.25,0") != std::string::npos);
}

TEST_CASE("exit codes") {
  fs::path dir = scratch_dir("exit");
  ScenarioConfig c;
  c.output_dir = dir.string();
  c.n_points = 30;
  c.fixture = "trivial";
  CHECK(run("validate", c) == kExitPass);
  ScenarioConfig bad = c;
  bad.fixture = "abelian_sphere(1)";
  bad.corrupt = "B";
  CHECK(run("validate", bad) == kExitGateFailure);
  ScenarioConfig unknown = c;
  unknown.fixture = "nope";
  CHECK(run("validate", unknown) == kExitConfigError);
  CHECK(run("frobnicate", c) == kExitConfigError);
  ScenarioConfig far = c;
  far.fixture = "heisenberg_plane";
  far.surface = "sphere_of_radius(5)";
  far.max_depth = 3;
  CHECK(run("holonomy", far) == kExitGridFailure);
  ScenarioConfig wrong = c;
  wrong.fixture = "abelian_sphere(1)";
  wrong.surface = "sphere_of_radius(1)";
  wrong.grid_mode = "explicit";
  wrong.assignment = {0};
  CHECK(run("holonomy", wrong) == kExitGridFailure);
  ScenarioConfig empty = c;
  empty.suite_fixtures_set = true;
  CHECK(run("suite", empty) == kExitConfigError);
  fs::remove_all(dir);
}

TEST_CASE("holonomy and derivative write their reports") {
  fs::path dir = scratch_dir("reports");
  ScenarioConfig c;
  c.output_dir = dir.string();
  c.fixture = "abelian_sphere(1)";
  CHECK(run("holonomy", c) == kExitPass);
  CHECK(fs::exists(dir / (output_stem("holonomy", c.fixture, c) + ".json")));
  c.fixture = "abelian_plane";
  c.fd.steps = {0.02, 0.01, 0.005};
  CHECK(run("derivative", c) == kExitPass);
  const std::string stem = output_stem("derivative", c.fixture, c);
  CHECK(fs::exists(dir / (stem + ".json")));
  std::string csv = slurp(dir / (stem + "_convergence.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs give byte-identical reports") {
  fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  ScenarioConfig c;
  c.fixture = "abelian_plane";
  c.n_points = 30;
  c.fd.steps = {0.02, 0.01, 0.005};
  for (const char* cmd : {"validate", "holonomy", "derivative"}) {
    c.output_dir = a.string();
    run(cmd, c);
    c.output_dir = b.string();
    run(cmd, c);
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++compared;
  }
  CHECK(compared == 4);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("tightened tolerance fails integration checks only") {
  SuiteOptions opt;
  opt.fixtures = {"heisenberg_torus4"};
  opt.n_points = 30;
  opt.axiom_samples = 100;
  opt.interchange_samples = 10;
  SuiteReport ok = run_suite(opt);
  CHECK(ok.pass());
  opt.cfg.tol_target = 1e-8;
  SuiteReport tight = run_suite(opt);
  CHECK_FALSE(tight.pass());
  for (const auto& ch : tight.checks) {
    CAPTURE(ch.id);
    if (ch.kind == "algebraic") CHECK(ch.pass);
  }
  for (std::size_t k = 1; k < tight.checks.size(); ++k) CHECK(tight.checks[k - 1].id <= tight.checks[k].id);
  opt.fixtures.clear();
  CHECK_THROWS_AS(run_suite(opt), ConfigError);
}
