#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wavelab/analysis.hpp"

namespace wavelab {

/// One of the initial-data families on the run grid.
///   zero; gaussian{amplitude, width, center}; bump{amplitude, radius, center};
///   ricker{amplitude, width, center}; mode{amplitude, index}.
/// `mollify`, when set, smooths the profile with that kernel radius.
struct FieldSpec {
  std::string family = "zero";
  double amplitude = 1.0;
  double width = 1.0;
  double radius = 1.0;
  std::vector<double> center;
  int index = 1;
  std::optional<double> mollify;
};

struct GridSpec {
  int dimension = 1;
  GridMode mode = GridMode::periodic;
  double L = 1.0;
  Eigen::Index N = 64;
};

struct ExperimentConfig {
  std::string name = "custom";
  GridSpec grid;
  double dt = 0.01;
  double T = 1.0;
  long record_every = 1;
  DampingCoefficient damping;
  std::optional<double> cutoff_m;
  FieldSpec u0;
  FieldSpec u1;
  bool zero_total = false;       // replace u1 so that int (a u0 + u1) = 0
  double envelope_width = 2.0;   // Gaussian envelope used by zero_total
  double gamma = 0.0;            // L^1 weight exponent of the seed constants
  std::optional<double> epsilon;  // default V0 / 2
  std::optional<double> C_prop21;  // default: empirical constant for the dimension
  double shell_width = 0.0;      // default 2 h when 0
  int test_functions = 0;
  std::optional<double> fit_t_lo;  // default T / 10
  std::optional<double> fit_t_hi;  // default T
  std::string output_path;
  std::uint64_t rng_seed = 0;

  Grid make_grid() const;
  /// Checks every precondition of the modules a run touches.
  void validate() const;
};

/// Parses a JSON document; unknown keys and invalid values raise ConfigError
/// with the line of the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Named scenarios: oracle, theorem3d, open2d, expdamp.
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Initial data of a config on its grid, including zero_total compensation.
InitialData build_initial_data(const ExperimentConfig& config);
Damping build_damping(const ExperimentConfig& config);
SeedConstants build_seed_constants(const ExperimentConfig& config, const InitialData& data);

struct CertificateSummary {
  double sup_ratio = 0.0;
  double t_sup = 0.0;
  bool pass = false;
};

struct RunReport {
  ExperimentConfig config;
  SeedConstants seeds;
  DataNorms norms;
  bool assumption_A = false;
  long steps = 0;
  long dissipation_violations = 0;
  double dissipation_max_increase = 0.0;
  CertificateSummary bound_energy;
  CertificateSummary bound_l2;
  double lemma21_sup = 0.0;
  std::optional<DecayFit> fit_energy;
  std::optional<DecayFit> fit_l2;
  double max_residual_2_5 = 0.0;
  double max_residual_2_13 = 0.0;
  double max_residual_2_16 = 0.0;
  std::vector<double> weak_residuals;
  double max_boundary = 0.0;
  bool pass = false;
  double wall_seconds = 0.0;  // not part of the serialized report
};

struct RunResult {
  RunHistory history;
  RunReport report;
};

/// Validates, integrates, evaluates certificates and, when output_path is
/// set, writes the CSV there.
RunResult run_experiment(const ExperimentConfig& config);

/// Deterministic JSON form of a report (wall time excluded).
nlohmann::json report_to_json(const RunReport& report);

void write_history_csv(std::ostream& os, const RunHistory& history);

/// Reads the t column and a named column of a history CSV.
struct CsvColumns {
  std::vector<double> t;
  std::vector<double> value;
};
CsvColumns read_history_csv(const std::string& path, const std::string& column);

/// Keys a sweep may vary.
enum class SweepKey { cutoff_m, dt, N, alpha };
SweepKey sweep_key_from_string(std::string_view name);

/// Copy of `base` with `key` set to `value`; the output path gains a suffix.
ExperimentConfig sweep_member(const ExperimentConfig& base, SweepKey key, double value);

/// Independent runs in the order of `values`, on up to `workers` threads.
std::vector<RunReport> sweep(const ExperimentConfig& base, SweepKey key, const std::vector<double>& values,
                             int workers = 1);

/// Worker count from WAVELAB_WORKERS (default 1).
int workers_from_env();

}  // namespace wavelab
