// wavelab: command-line front end for the damped wave lab.
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wavelab/experiment.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

void emit(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path + "'");
  os << j.dump(2) << '\n';
}

int cmd_run(const ExperimentConfig& config, const std::string& report_path) {
  const RunResult result = run_experiment(config);
  std::cerr << "wall time: " << result.report.wall_seconds << " s\n";
  emit(report_to_json(result.report), report_path);
  return result.report.pass ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& config, const std::string& vary, int workers, const std::string& report_path) {
  const std::size_t eq = vary.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary expects key=v1,v2,...");
  const SweepKey key = sweep_key_from_string(vary.substr(0, eq));
  const std::vector<RunReport> reports = sweep(config, key, parse_list(vary.substr(eq + 1)), workers);
  nlohmann::json out = nlohmann::json::array();
  bool pass = true;
  for (const RunReport& r : reports) {
    std::cerr << r.config.name << ": wall time " << r.wall_seconds << " s\n";
    out.push_back(report_to_json(r));
    pass = pass && r.pass;
  }
  emit(out, report_path);
  return pass ? 0 : 1;
}

struct Prop21Args {
  int n = 3;
  double theta = 1.0;
  double gamma = 0.0;
  int part = 1;
  std::string family = "gaussian";
  long N = 64;
  double L = 16.0;
  int levels = 1;
  std::string scaling = "domain";
  bool bypass = false;
  int count = 12;
  std::uint64_t seed = 1;
  std::string csv;
};

int cmd_prop21(const Prop21Args& a) {
  if (a.part != 1 && a.part != 2) throw ConfigError("--part must be 1 or 2");
  if (a.family != "gaussian" && a.family != "dipole") throw ConfigError("--family must be gaussian or dipole");
  if (a.scaling != "domain" && a.scaling != "resolution") throw ConfigError("--scaling must be domain or resolution");
  if (a.levels < 1 || a.count < 1) throw ConfigError("--levels and --count must be positive");
  const Prop21Part part = a.part == 1 ? Prop21Part::part1 : Prop21Part::part2;
  const Grid base = [&] {
    try {
      return Grid(a.n, GridMode::periodic, a.L, a.N);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }();
  auto family = [&](const Grid& g) {
    return a.family == "gaussian" ? gaussian_family(g, a.count, a.seed) : dipole_family(g, a.count, a.seed);
  };

  std::ofstream file;
  if (!a.csv.empty()) {
    file.open(a.csv);
    if (!file) throw Error("cannot write '" + a.csv + "'");
  }
  std::ostream& os = a.csv.empty() ? std::cout : file;
  os << "sample_id,lhs,rhs,ratio,resolution,L\n" << std::setprecision(17);

  double C_emp = 0.0;
  double L = a.L;
  long N = a.N;
  std::vector<std::vector<double>> lhs(a.count);
  for (int level = 0; level < a.levels; ++level) {
    const Grid grid(a.n, GridMode::periodic, L, N);
    const std::vector<ScalarField> members = family(grid);
    for (int i = 0; i < a.count; ++i) {
      const Prop21Check c = part == Prop21Part::part1 ? check_part1(members[i], a.theta, a.gamma)
                                                       : check_part2(members[i], a.theta, a.gamma, a.bypass);
      os << i << ',' << c.lhs << ',' << c.rhs << ',' << c.ratio << ',' << N << ',' << L << '\n';
      lhs[i].push_back(c.lhs);
      if (level == 0) C_emp = std::max(C_emp, c.ratio);
    }
    if (a.scaling == "domain") L *= 2.0;
    N *= 2;
  }
  std::cerr << "C_emp = " << C_emp << " (" << a.count << " samples, N = " << base.points_per_axis()
            << ", L = " << base.half_extent() << ")\n";
  if (a.levels > 1) {
    for (int i = 0; i < a.count; ++i) {
      std::cerr << "sample " << i << " lhs change per doubling:";
      for (std::size_t k = 1; k < lhs[i].size(); ++k) std::cerr << ' ' << lhs[i][k] / lhs[i][k - 1] - 1.0;
      std::cerr << '\n';
    }
  }
  return 0;
}

int cmd_mconv(const ExperimentConfig& config, const std::string& ms_text, int workers) {
  const InitialData data = build_initial_data(config);
  Scenario sc{data, config.damping, config.dt, config.T, config.record_every, build_seed_constants(config, data)};
  const MConvergenceStudy study = m_convergence_study(sc, parse_list(ms_text), workers);
  std::cout << "m,sup_error,lemma21_sup\n" << std::setprecision(17);
  std::vector<double> sups;
  for (const MConvergenceRow& r : study.rows) {
    std::cout << r.m << ',' << r.sup_error << ',' << r.lemma21_sup << '\n';
    sups.push_back(r.lemma21_sup);
  }
  bool pass = study.nonincreasing;
  std::cerr << "error column " << (study.strictly_decreasing ? "strictly decreasing" : study.nonincreasing ? "nonincreasing" : "NOT monotone") << '\n';
  if (sups.size() >= 3) {
    const UniformityReport u = uniformity_check(sups);
    std::cerr << "uniformity: max/min = " << (u.min > 0.0 ? u.max / u.min : 0.0) << (u.pass ? " (pass)" : " (FAIL)") << '\n';
    pass = pass && u.pass;
  }
  return pass ? 0 : 1;
}

int cmd_decay_fit(const std::string& csv, const std::string& window) {
  const std::vector<double> w = parse_list(window);
  if (w.size() != 2) throw ConfigError("--window expects a,b");
  std::cout << "quantity,t_lo,t_hi,slope,r2,sup_ratio\n" << std::setprecision(17);
  const std::pair<const char*, const char*> columns[] = {{"energy", "ratio_energy"}, {"l2_sq", "ratio_l2"}};
  for (const auto& [value, ratio] : columns) {
    const CsvColumns data = read_history_csv(csv, value);
    const CsvColumns ratios = read_history_csv(csv, ratio);
    const DecayFit fit = fit_decay(data.t, data.value, w[0], w[1]);
    double sup = 0.0;
    for (std::size_t i = 0; i < ratios.t.size(); ++i)
      if (ratios.t[i] >= 1.0) sup = std::max(sup, ratios.value[i]);
    std::cout << value << ',' << fit.t_lo << ',' << fit.t_hi << ',' << fit.slope << ',' << fit.r_squared << ','
              << sup << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the damped wave equation u_tt - Lap u + a(x) u_t = 0"};
  app.require_subcommand(1);

  std::string config_path, report_path, vary, ms, csv, window, preset_name;
  int workers = 0;
  bool emit_only = false;

  auto* run = app.add_subcommand("run", "Run one configured experiment");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  auto* sw = app.add_subcommand("sweep", "Run a family of experiments varying one key");
  sw->add_option("--config", config_path, "JSON config file")->required();
  sw->add_option("--vary", vary, "key=v1,v2,... with key in cutoff_m, dt, N, alpha")->required();
  sw->add_option("--workers", workers, "Parallel runs (default: WAVELAB_WORKERS or 1)");
  sw->add_option("--report", report_path, "Write the JSON reports here instead of stdout");

  auto* pre = app.add_subcommand("preset", "Emit or run a named scenario");
  pre->add_option("name", preset_name, "oracle, theorem3d, open2d or expdamp")->required();
  pre->add_flag("--emit", emit_only, "Print the config instead of running it");
  pre->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  Prop21Args pa;
  auto* prop = app.add_subcommand("prop21", "Riesz-weighted Fourier inequality checks");
  prop->add_option("-n,--dimension", pa.n, "Dimension")->check(CLI::Range(1, 3));
  prop->add_option("--theta", pa.theta, "Riesz exponent");
  prop->add_option("--gamma", pa.gamma, "L1 weight exponent")->check(CLI::Range(0.0, 1.0));
  prop->add_option("--part", pa.part, "1 (general data) or 2 (mean-zero data)");
  prop->add_option("--family", pa.family, "gaussian or dipole");
  prop->add_option("-N,--resolution", pa.N, "Points per axis at the first level");
  prop->add_option("-L,--half-extent", pa.L, "Half extent at the first level");
  prop->add_option("--levels", pa.levels, "Number of doubling levels");
  prop->add_option("--scaling", pa.scaling, "domain (L and N double) or resolution (N doubles)");
  prop->add_flag("--bypass-mean-zero", pa.bypass, "Skip the mean-zero check in part 2");
  prop->add_option("--count", pa.count, "Family size");
  prop->add_option("--seed", pa.seed, "Family seed");
  prop->add_option("--csv", pa.csv, "Write the table here instead of stdout");

  auto* mc = app.add_subcommand("mconv", "Cutoff convergence and uniformity study");
  mc->add_option("--config", config_path, "JSON config file")->required();
  mc->add_option("--ms", ms, "Increasing cutoff radii m1,m2,...")->required();
  mc->add_option("--workers", workers, "Parallel runs (default: WAVELAB_WORKERS or 1)");

  auto* df = app.add_subcommand("decay-fit", "Fit log-log decay slopes to a history CSV");
  df->add_option("--csv", csv, "History CSV written by run")->required();
  df->add_option("--window", window, "t_lo,t_hi")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (workers <= 0) workers = workers_from_env();
    if (*run) return cmd_run(load_config(config_path), report_path);
    if (*sw) return cmd_sweep(load_config(config_path), vary, workers, report_path);
    if (*pre) {
      const ExperimentConfig c = preset(preset_name);
      if (emit_only) {
        std::cout << config_to_json(c).dump(2) << '\n';
        return 0;
      }
      return cmd_run(c, report_path);
    }
    if (*prop) return cmd_prop21(pa);
    if (*mc) return cmd_mconv(load_config(config_path), ms, workers);
    if (*df) return cmd_decay_fit(csv, window);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
