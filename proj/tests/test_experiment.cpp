#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavelab/experiment.hpp"

using namespace wavelab;

namespace {

// Small 1-D box run; the data families and damping are overridden per test.
ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.grid = {1, GridMode::box_dirichlet, 8.0, 161};
  c.dt = 0.05;
  c.T = 2.0;
  c.record_every = 2;
  c.damping = {DampingFamily::polynomial, 1.0, 1.0};
  c.u0.family = "gaussian";
  c.u1.family = "gaussian";
  c.u1.amplitude = 0.5;
  c.C_prop21 = 1.0;
  c.test_functions = 2;
  c.rng_seed = 5;
  return c;
}

std::string csv_of(const RunHistory& h) {
  std::ostringstream os;
  write_history_csv(os, h);
  return os.str();
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wavelab_test_" + name);
}

}  // namespace

TEST_CASE("parsing a minimal config") {
  const ExperimentConfig c = parse_config(R"({
    "name": "mini",
    "grid": {"dimension": 2, "mode": "periodic", "L": 4, "N": 32},
    "dt": 0.1, "T": 1, "record_every": 1,
    "damping": {"family": "constant", "V0": 2},
    "data": {"u0": {"family": "gaussian", "width": 0.5}}
  })");
  CHECK(c.name == "mini");
  CHECK(c.grid.dimension == 2);
  CHECK(c.grid.mode == GridMode::periodic);
  CHECK(c.damping.V0 == 2.0);
  CHECK(c.u0.width == 0.5);
  CHECK(c.u1.family == "zero");
  CHECK_FALSE(c.cutoff_m.has_value());
}

TEST_CASE("config errors carry the line of the offending key") {
  CHECK(error_line("{\n  \"dt\": 0.1,\n  \"colour\": 3\n}") == 3);
  CHECK(error_line("{\n  \"grid\": {\n    \"L\": 4,\n    \"N\": \"many\"\n  }\n}") == 4);
  CHECK(error_line("{\n  \"data\": {\n    \"u0\": {\"family\": \"gaussian\", \"bogus\": 1}\n  }\n}") == 3);
  CHECK(error_line("{\n  \"dt\": 0.1,\n  \"T\": 1,\n  \"grid\": {\"L\": 1, \"N\": 20},\n  \"dt\" 3\n}") == 5);
  // dt = 0.5 violates the CFL bound h = 2/63.
  CHECK(error_line("{\n  \"grid\": {\"L\": 1, \"N\": 64},\n\n  \"dt\": 0.5\n}") == 4);
  CHECK(error_line("{\n  \"damping\": {\"family\": \"cubic\"}\n}") == 2);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/wavelab.json"), ConfigError);
}

TEST_CASE("validation rejects broken preconditions") {
  ExperimentConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.damping.V0 = 2.0;  // polynomial a(0) = 1 < 2
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.epsilon = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.record_every = 3;  // 0.15 between records
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.u0.family = "sawtooth";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.fit_t_lo = 0.5;
  c.fit_t_hi = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("presets") {
  REQUIRE(preset_names().size() == 4);
  for (const std::string& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    CHECK_NOTHROW(c.validate());
    // JSON round trip
    const ExperimentConfig back = parse_config(config_to_json(c).dump(2));
    CHECK(config_to_json(back) == config_to_json(c));
  }
  const ExperimentConfig oracle = preset("oracle");
  CHECK(oracle.grid.dimension == 1);
  CHECK(oracle.grid.mode == GridMode::periodic);
  CHECK(oracle.damping.family == DampingFamily::constant);
  const ExperimentConfig th = preset("theorem3d");
  CHECK(th.grid.mode == GridMode::radial3d);
  CHECK(th.damping.alpha == 1.0);
  CHECK(th.T == 100.0);
  CHECK_THROWS_AS(preset("nonsense"), ConfigError);
}

TEST_CASE("open2d data has zero total integral") {
  const ExperimentConfig c = preset("open2d");
  CHECK(c.u1.family == "ricker");
  const InitialData d = build_initial_data(c);
  CHECK(std::abs(d.norms.total_integral) <= 1e-10 * d.norms.l1_a_u0);
}

TEST_CASE("zero data run") {
  ExperimentConfig c = small_config();
  c.u0.family = "zero";
  c.u1.family = "zero";
  const RunResult r = run_experiment(c);
  CHECK(r.report.pass);
  std::istringstream in(csv_of(r.history));
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "t,energy,l2_sq,damping_cum,damping_u_cum,residual_2_5,residual_2_13,residual_2_16,ratio_energy,ratio_l2,"
        "boundary");
  long rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    while (std::getline(ss, cell, ',')) CHECK(std::stod(cell) == 0.0);
  }
  CHECK(rows == 21);
}

TEST_CASE("T = 0 gives one record") {
  ExperimentConfig c = small_config();
  c.T = 0.0;
  c.test_functions = 0;
  const RunResult r = run_experiment(c);
  CHECK(r.history.records.size() == 1);
  CHECK(r.report.steps == 0);
}

TEST_CASE("runs are deterministic") {
  const ExperimentConfig c = small_config();
  const RunResult a = run_experiment(c);
  const RunResult b = run_experiment(c);
  CHECK(csv_of(a.history) == csv_of(b.history));
  CHECK(report_to_json(a.report).dump() == report_to_json(b.report).dump());
  CHECK(report_to_json(a.report).dump().find("wall") == std::string::npos);
}

TEST_CASE("CSV output and read-back") {
  ExperimentConfig c = small_config();
  c.output_path = scratch("history.csv").string();
  const RunResult r = run_experiment(c);
  const CsvColumns energy = read_history_csv(c.output_path, "energy");
  REQUIRE(energy.t.size() == r.history.records.size());
  for (std::size_t i = 0; i < energy.t.size(); ++i) {
    CHECK(energy.t[i] == r.history.records[i].t);
    CHECK(energy.value[i] == r.history.records[i].E);
  }
  CHECK_THROWS_AS(read_history_csv(c.output_path, "momentum"), Error);
  std::filesystem::remove(c.output_path);
}

TEST_CASE("sweeps") {
  const ExperimentConfig base = small_config();
  SUBCASE("member naming") {
    ExperimentConfig b = base;
    b.output_path = "out/run.csv";
    const ExperimentConfig m = sweep_member(b, SweepKey::cutoff_m, 3.0);
    CHECK(m.cutoff_m == 3.0);
    CHECK(m.name == "small_cutoff_m=3");
    CHECK(m.output_path == "out/run_cutoff_m=3.csv");
    const ExperimentConfig d = sweep_member(b, SweepKey::dt, 0.025);
    CHECK(d.record_every == 4);
    CHECK_THROWS_AS(sweep_member(b, SweepKey::N, 100.5), ConfigError);
    CHECK(sweep_key_from_string("alpha") == SweepKey::alpha);
    CHECK_THROWS_AS(sweep_key_from_string("T"), ConfigError);
  }
  SUBCASE("a one-member sweep equals the plain run") {
    const std::vector<RunReport> s = sweep(base, SweepKey::alpha, {1.0});
    const RunReport plain = run_experiment(base).report;
    REQUIRE(s.size() == 1);
    CHECK(s[0].max_residual_2_5 == plain.max_residual_2_5);
    CHECK(s[0].bound_energy.sup_ratio == plain.bound_energy.sup_ratio);
    CHECK(s[0].weak_residuals == plain.weak_residuals);
  }
  SUBCASE("parallel and serial sweeps agree") {
    const std::vector<RunReport> serial = sweep(base, SweepKey::cutoff_m, {1.0, 2.0, 4.0}, 1);
    const std::vector<RunReport> parallel = sweep(base, SweepKey::cutoff_m, {1.0, 2.0, 4.0}, 3);
    for (std::size_t i = 0; i < serial.size(); ++i)
      CHECK(report_to_json(serial[i]).dump() == report_to_json(parallel[i]).dump());
  }
  SUBCASE("dt halving cuts the energy residual by about four") {
    ExperimentConfig c = base;
    c.test_functions = 0;
    const std::vector<RunReport> s = sweep(c, SweepKey::dt, {0.05, 0.025});
    const double ratio = s[0].max_residual_2_5 / s[1].max_residual_2_5;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
  CHECK_THROWS_AS(sweep(base, SweepKey::dt, {}), ConfigError);
}

TEST_CASE("worker count from the environment") {
  unsetenv("WAVELAB_WORKERS");
  CHECK(workers_from_env() == 1);
  setenv("WAVELAB_WORKERS", "4", 1);
  CHECK(workers_from_env() == 4);
  setenv("WAVELAB_WORKERS", "four", 1);
  CHECK_THROWS_AS(workers_from_env(), ConfigError);
  unsetenv("WAVELAB_WORKERS");
}
