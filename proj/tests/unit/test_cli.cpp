#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "esld/config.hpp"
#include "esld/experiments.hpp"

using namespace esld;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "esld_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ESLD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

CsvReport read(const fs::path& p) {
  std::ifstream in(p);
  return parse_csv(in);
}

ExperimentConfig quick_f1() {
  ExperimentConfig cfg;
  cfg.periods = {0.01};
  cfg.run_periods = 20;
  cfg.integrator.steps_per_period = 400;
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text round-trips") {
  ExperimentConfig cfg;
  cfg.objective = "f2";
  cfg.f2 = {0.3, 1.25, 0.035};
  cfg.fields_a = 20.0;
  cfg.dither_kind = DitherKind::sawtooth;
  cfg.periods = {0.1, 0.01, 1e-4, 1.0 / 3.0};
  cfg.needles = 64;
  cfg.amplitude = AmplitudeLaw::unit;
  cfg.u1_offset = 0.1;
  cfg.x0 = {1.8};
  cfg.run_horizon = 2.0;
  cfg.integrator = {800, Method::euler};
  cfg.output_path = "runs/out.csv";
  cfg.report_time = 1.0;
  const ExperimentConfig back = parse_config_text(config_text(cfg));
  CHECK(back == cfg);
  CHECK(parse_config_text(config_text(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("parsing and overrides") {
  const ExperimentConfig cfg = parse_config_text(
      "# comment\n\nobjective.name = f3   # trailing\nx0 = 1.8, 1.8\ndither.period=0.1,0.01\n");
  CHECK(cfg.objective == "f3");
  CHECK(cfg.x0 == Vec{1.8, 1.8});
  CHECK(cfg.periods == Vec{0.1, 0.01});
  ExperimentConfig o = cfg;
  apply_override(o, "fields.a=7.5");
  CHECK(o.fields_a == 7.5);
  CHECK_THROWS_AS(apply_override(o, "fields.a"), ConfigError);
  CHECK_THROWS_AS(apply_override(o, "no.such.key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(o, "fields.a=abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(o, "dither.kind=triangle"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("objective.name f1\n"), ConfigError);
}

TEST_CASE("validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  auto broken = [&](auto edit) {
    ExperimentConfig c = cfg;
    edit(c);
    CHECK_THROWS_AS(validate(c), ConfigError);
  };
  broken([](ExperimentConfig& c) { c.objective = "f9"; });
  broken([](ExperimentConfig& c) { c.fields = "other"; });
  broken([](ExperimentConfig& c) { c.periods = {0.1, -0.01}; });
  broken([](ExperimentConfig& c) { c.periods.clear(); });
  broken([](ExperimentConfig& c) { c.run_periods = 0; });
  broken([](ExperimentConfig& c) { c.x0 = {1.0, 2.0}; });
  broken([](ExperimentConfig& c) { c.integrator.steps_per_period = 2002; });
  broken([](ExperimentConfig& c) { c.landscape_points = 1; });
  broken([](ExperimentConfig& c) { c.run_horizon = 0.015; c.periods = {0.01}; });
}

TEST_CASE("simulate writes K+1 rows per period") {
  const CommandResult r = cmd_simulate(quick_f1());
  CHECK(r.main.header == std::vector<std::string>{"T", "k", "t", "x1"});
  CHECK(r.main.rows.size() == 21);
  CHECK(r.extra("trajectory").header == std::vector<std::string>{"T", "t", "x1"});
  CHECK_FALSE(r.diverged);

  ExperimentConfig flat = quick_f1();
  flat.objective = "constant";
  const CommandResult c = cmd_simulate(flat);
  for (const auto& row : c.main.rows) CHECK(std::stod(row[3]) == doctest::Approx(1.8));
}

TEST_CASE("simulate on the two-dimensional preset draws a staircase") {
  ExperimentConfig cfg = load_config(std::string(ESLD_PRESETS_DIR) + "/example3.cfg");
  cfg.run_periods = 10;
  cfg.integrator.steps_per_period = 400;
  const CommandResult r = cmd_simulate(cfg);
  CHECK(r.main.header == std::vector<std::string>{"T", "k", "t", "x1", "x2"});
  REQUIRE(r.main.rows.size() == 11);
  for (std::size_t k = 1; k < r.main.rows.size(); ++k) {
    const std::size_t idle = 4 - (k - 1) % 2;
    CHECK(std::stod(r.main.rows[k][idle]) ==
          doctest::Approx(std::stod(r.main.rows[k - 1][idle])).epsilon(1e-12));
  }
}

TEST_CASE("compare schema and sanity rows") {
  ExperimentConfig cfg = quick_f1();
  cfg.periods = {0.01, 0.01};
  const CommandResult r = cmd_compare(cfg);
  CHECK(r.main.header ==
        std::vector<std::string>{"T", "k", "t", "x_sim_1", "x_rec_1", "grad_1", "error"});
  CHECK(r.main.rows.size() == 42);
  CHECK(r.extra("summary").header ==
        std::vector<std::string>{"T", "report_time", "error_at_report", "final_sim_norm",
                                 "final_rec_norm", "final_error", "agree"});
  const CsvReport& ratios = r.extra("ratios");
  CHECK(ratios.header == std::vector<std::string>{"T_coarse", "T_fine", "error_coarse",
                                                  "error_fine", "ratio", "difference"});
  REQUIRE(ratios.rows.size() == 1);
  CHECK(std::stod(ratios.rows[0][5]) == 0.0);
  CHECK(std::stod(ratios.rows[0][4]) == 1.0);
}

TEST_CASE("compare flags disagreement when the recursion stalls") {
  ExperimentConfig cfg = load_config(std::string(ESLD_PRESETS_DIR) + "/example2.cfg");
  cfg.periods = {0.001};
  cfg.run_horizon = 1.0;
  cfg.integrator.steps_per_period = 400;
  const CommandResult r = cmd_compare(cfg);
  const auto& row = r.extra("summary").rows.at(0);
  CHECK(row[6] == "0");
  CHECK(std::stod(row[3]) < 0.2);
  CHECK(std::abs(std::stod(row[4]) - 1.5) < 0.2);
}

TEST_CASE("landscape schema") {
  ExperimentConfig cfg = quick_f1();
  cfg.landscape_points = 21;
  const CommandResult r = cmd_landscape(cfg);
  CHECK(r.main.header == std::vector<std::string>{"T", "x", "L", "gradient"});
  CHECK(r.main.rows.size() == 21);
  CHECK(r.extra("minima").header == std::vector<std::string>{"T", "local_minima", "argmin"});
  CHECK(r.extra("minima").rows.at(0)[1] == "1");
  int sign_changes = 0;
  for (std::size_t i = 1; i < r.main.rows.size(); ++i) {
    const double a = std::stod(r.main.rows[i - 1][3]);
    const double b = std::stod(r.main.rows[i][3]);
    sign_changes += (a > 0.0) != (b > 0.0);
  }
  CHECK(sign_changes == 1);
  cfg.landscape_points = 1;
  CHECK_THROWS_AS(cmd_landscape(cfg), ConfigError);
}

TEST_CASE("verify reports every check") {
  ExperimentConfig cfg;
  cfg.periods = {0.1};
  cfg.dither_kind = DitherKind::sawtooth;
  const CommandResult ok = cmd_verify(cfg);
  CHECK(ok.main.header == std::vector<std::string>{"T", "check", "measured", "threshold", "pass"});
  CHECK(ok.main.rows.size() == 10);
  for (const auto& row : ok.main.rows) {
    CAPTURE(row[1]);
    CHECK(row[4] == "pass");
  }
  cfg.u1_offset = 0.1;
  const CommandResult broken = cmd_verify(cfg);
  bool symmetry_failed = false;
  for (const auto& row : broken.main.rows) {
    if (row[1] == "stm_symmetry") symmetry_failed = row[4] == "fail";
  }
  CHECK(symmetry_failed);
}

TEST_CASE("divergence produces sentinel rows") {
  ExperimentConfig cfg = quick_f1();
  cfg.fields_a = -5.0;
  cfg.x0 = {1e4};
  const CommandResult r = cmd_simulate(cfg);
  CHECK(r.diverged);
  REQUIRE(r.main.rows.size() == 1);
  CHECK(r.main.rows[0][1] == "diverged");
  CHECK(r.main.rows[0].size() == r.main.header.size());
}

TEST_CASE("sibling paths") {
  CHECK(sibling_path("runs/out.csv", "summary") == "runs/out.summary.csv");
  CHECK(sibling_path("runs.v1/out", "summary") == "runs.v1/out.summary.csv");
}

TEST_CASE("command line tool") {
  const fs::path out = scratch("sim.csv");
  CHECK(run_cli("simulate --set run.periods=5 --set integrator.steps_per_period=400 --out " +
                out.string()) == 0);
  const CsvReport sim = read(out);
  CHECK(sim.header.front() == "T");
  CHECK(sim.rows.size() == 6);
  CHECK(fs::exists(sibling_path(out.string(), "trajectory")));

  const fs::path cfg_file = scratch("run.cfg");
  {
    ExperimentConfig cfg = quick_f1();
    cfg.output_path = scratch("from_config.csv").string();
    std::ofstream f(cfg_file);
    write_config(f, cfg);
  }
  CHECK(run_cli("compare --config " + cfg_file.string()) == 0);
  CHECK(read(scratch("from_config.csv")).header.back() == "error");
  CHECK(fs::exists(scratch("from_config.summary.csv")));

  CHECK(run_cli("simulate --set objective.name=nope") == 1);
  CHECK(run_cli("simulate --config /nonexistent/file.cfg") == 1);
  CHECK(run_cli("landscape --set landscape.points=1") == 1);
  CHECK(run_cli("simulate --set fields.a=-5 --set x0=10000 --set run.periods=2 --out " +
                scratch("div.csv").string()) == 2);
  CHECK(read(scratch("div.csv")).rows.at(0)[1] == "diverged");
}

}  // TEST_SUITE
