#include "wavelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

using nlohmann::json;

namespace {

// A validation failure tied to a dotted key path such as "damping.alpha".
struct KeyedError {
  std::string key;
  std::string message;
};

// Maps a key path to the 1-based line where it first appears in the source.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  int line_of(const std::string& dotted) const {
    std::size_t pos = 0;
    std::stringstream ss(dotted);
    std::string key;
    while (std::getline(ss, key, '.')) {
      const std::size_t found = text_.find("\"" + key + "\"", pos);
      if (found == std::string_view::npos) return pos == 0 ? 0 : line_at(pos);
      pos = found;
    }
    return line_at(pos);
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  }

 private:
  std::string_view text_;
};

// Reads one JSON object, remembering which keys were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw KeyedError{path_, "expected an object"};
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw KeyedError{full(key), "expected a number"};
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v) || std::abs(v) > 1e15) throw KeyedError{full(key), "expected an integer"};
    return static_cast<long>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw KeyedError{full(key), "expected true or false"};
    return j_.at(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) throw KeyedError{full(key), "expected a string"};
    return j_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return {};
    const json& v = j_.at(key);
    if (!v.is_array()) throw KeyedError{full(key), "expected an array of numbers"};
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw KeyedError{full(key), "expected an array of numbers"};
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<ObjectReader> child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return ObjectReader(j_.at(key), full(key));
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw KeyedError{full(item.key()), "unknown key '" + item.key() + "'"};
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

FieldSpec read_field(ObjectReader r) {
  FieldSpec f;
  f.family = r.string("family", f.family);
  f.amplitude = r.number("amplitude", f.amplitude);
  f.width = r.number("width", f.width);
  f.radius = r.number("radius", f.radius);
  f.center = r.numbers("center");
  f.index = static_cast<int>(r.integer("index", f.index));
  f.mollify = r.optional_number("mollify");
  r.finish();
  return f;
}

ExperimentConfig read_config(const json& root) {
  ExperimentConfig c;
  ObjectReader r(root, "");
  c.name = r.string("name", c.name);
  if (auto g = r.child("grid")) {
    c.grid.dimension = static_cast<int>(g->integer("dimension", c.grid.dimension));
    const std::string mode = g->string("mode", std::string(to_string(c.grid.mode)));
    try {
      c.grid.mode = grid_mode_from_string(mode);
    } catch (const InvalidArgument& e) {
      throw KeyedError{"grid.mode", e.what()};
    }
    c.grid.L = g->number("L", c.grid.L);
    c.grid.N = g->integer("N", c.grid.N);
    g->finish();
  }
  c.dt = r.number("dt", c.dt);
  c.T = r.number("T", c.T);
  c.record_every = r.integer("record_every", c.record_every);
  if (auto d = r.child("damping")) {
    const std::string family = d->string("family", std::string(to_string(c.damping.family)));
    try {
      c.damping.family = damping_family_from_string(family);
    } catch (const InvalidArgument& e) {
      throw KeyedError{"damping.family", e.what()};
    }
    c.damping.V0 = d->number("V0", c.damping.V0);
    c.damping.alpha = d->number("alpha", c.damping.alpha);
    c.cutoff_m = d->optional_number("cutoff_m");
    d->finish();
  }
  if (auto d = r.child("data")) {
    if (auto u0 = d->child("u0")) c.u0 = read_field(std::move(*u0));
    if (auto u1 = d->child("u1")) c.u1 = read_field(std::move(*u1));
    c.zero_total = d->boolean("zero_total", c.zero_total);
    c.envelope_width = d->number("envelope_width", c.envelope_width);
    c.gamma = d->number("gamma", c.gamma);
    d->finish();
  }
  c.epsilon = r.optional_number("epsilon");
  c.C_prop21 = r.optional_number("C_prop21");
  c.shell_width = r.number("shell_width", c.shell_width);
  c.test_functions = static_cast<int>(r.integer("test_functions", c.test_functions));
  const std::vector<double> window = r.numbers("fit_window");
  if (!window.empty()) {
    if (window.size() != 2) throw KeyedError{"fit_window", "expected [t_lo, t_hi]"};
    c.fit_t_lo = window[0];
    c.fit_t_hi = window[1];
  }
  c.output_path = r.string("output_path", c.output_path);
  const long seed = r.integer("rng_seed", 0);
  if (seed < 0) throw KeyedError{"rng_seed", "must be nonnegative"};
  c.rng_seed = static_cast<std::uint64_t>(seed);
  r.finish();
  return c;
}

Eigen::VectorXd center_of(const FieldSpec& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.center.data(), static_cast<Eigen::Index>(f.center.size()));
}

ScalarField make_field(const Grid& grid, const FieldSpec& field) {
  ScalarField f(grid);
  if (field.family == "zero") f = ScalarField(grid);
  else if (field.family == "gaussian") f = make_gaussian(grid, field.amplitude, center_of(field), field.width);
  else if (field.family == "bump") f = make_bump(grid, field.radius, field.amplitude, center_of(field));
  else if (field.family == "ricker") f = make_ricker(grid, field.amplitude, center_of(field), field.width);
  else if (field.family == "mode") f = make_mode(grid, field.amplitude, field.index);
  else throw InvalidArgument("unknown data family '" + field.family + "' (expected zero, gaussian, bump, ricker or mode)");
  if (field.mollify) f = mollify(f, *field.mollify);
  return f;
}

template <typename Fn>
void keyed(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    throw KeyedError{key, e.what()};
  }
}

void validate_keyed(const ExperimentConfig& c) {
  std::optional<Grid> grid;
  keyed("grid", [&] { grid.emplace(c.make_grid()); });
  if (!(c.dt > 0.0)) throw KeyedError{"dt", "must be positive"};
  const CflReport cfl = cfl_check(*grid, c.dt);
  if (!cfl.pass) {
    std::ostringstream msg;
    msg << "dt = " << c.dt << " violates the CFL bound dt <= " << cfl.dt_max;
    throw KeyedError{"dt", msg.str()};
  }
  if (!(c.T >= 0.0) || !std::isfinite(c.T)) throw KeyedError{"T", "must be finite and nonnegative"};
  if (c.record_every < 1) throw KeyedError{"record_every", "must be at least 1"};
  if (static_cast<double>(c.record_every) * c.dt > 0.1 * (1.0 + 1e-12))
    throw KeyedError{"record_every", "record_every * dt must not exceed 0.1"};
  keyed("damping", [&] { c.damping.validate(); });
  if (c.cutoff_m) keyed("damping.cutoff_m", [&] { CutoffDamping{c.damping, *c.cutoff_m}.validate(); });
  keyed("damping", [&] {
    const AssumptionReport rep = verify_assumption_A(c.damping, *grid);
    if (!rep.pass) throw InvalidArgument("V0 exceeds the coefficient on the grid (min a = " + std::to_string(rep.min_value) + ")");
  });
  if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < c.damping.V0))
    throw KeyedError{"epsilon", "must lie in (0, V0)"};
  if (c.C_prop21 && !(*c.C_prop21 >= 0.0)) throw KeyedError{"C_prop21", "must be nonnegative"};
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw KeyedError{"data.gamma", "must lie in [0, 1]"};
  if (!(c.envelope_width > 0.0)) throw KeyedError{"data.envelope_width", "must be positive"};
  keyed("data.u0", [&] { make_field(*grid, c.u0); });
  keyed("data.u1", [&] { make_field(*grid, c.u1); });
  if (!(c.shell_width >= 0.0)) throw KeyedError{"shell_width", "must be nonnegative"};
  if (c.test_functions < 0) throw KeyedError{"test_functions", "must be nonnegative"};
  if (c.test_functions > 0) {
    if (!(c.T > 0.0)) throw KeyedError{"test_functions", "need T > 0"};
    keyed("test_functions", [&] { make_test_functions(*grid, c.T, c.test_functions, c.rng_seed); });
  }
  if (c.fit_t_lo || c.fit_t_hi) {
    const double lo = c.fit_t_lo.value_or(0.1 * c.T), hi = c.fit_t_hi.value_or(c.T);
    if (!(lo >= 1.0 && hi > lo)) throw KeyedError{"fit_window", "must satisfy t_hi > t_lo >= 1"};
  }
  keyed("data", [&] { build_seed_constants(c, build_initial_data(c)); });
}

json field_to_json(const FieldSpec& f) {
  json j = {{"family", f.family}};
  if (f.family == "zero") return j;
  j["amplitude"] = f.amplitude;
  if (f.family == "gaussian" || f.family == "ricker") j["width"] = f.width;
  if (f.family == "bump") j["radius"] = f.radius;
  if (f.family == "mode") j["index"] = f.index;
  if (!f.center.empty()) j["center"] = f.center;
  if (f.mollify) j["mollify"] = *f.mollify;
  return j;
}

FieldSpec gaussian_spec(double amplitude, double width) {
  FieldSpec f;
  f.family = "gaussian";
  f.amplitude = amplitude;
  f.width = width;
  return f;
}

double max_abs(const std::vector<EnergyRecord>& records, double EnergyRecord::*member) {
  double m = 0.0;
  for (const EnergyRecord& r : records) m = std::max(m, std::abs(r.*member));
  return m;
}

std::optional<DecayFit> try_fit(const RunHistory& h, Quantity q, double lo, double hi) {
  if (!(lo >= 1.0 && hi > lo)) return std::nullopt;
  try {
    return fit_decay(h, q, lo, hi);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

CertificateSummary summarize(const BoundCertificate& c) { return {c.sup_ratio, c.t_sup, c.pass}; }

json fit_to_json(const std::optional<DecayFit>& f) {
  if (!f) return nullptr;
  return {{"t_lo", f->t_lo}, {"t_hi", f->t_hi}, {"slope", f->slope}, {"intercept", f->intercept},
          {"r_squared", f->r_squared}, {"samples", f->samples}};
}

double cached_prop21_constant(int dimension) {
  static std::once_flag flags[4];
  static double values[4] = {0.0, 0.0, 0.0, 0.0};
  std::call_once(flags[dimension], [&] { values[dimension] = default_prop21_constant(dimension).C_emp; });
  return values[dimension];
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

Grid ExperimentConfig::make_grid() const { return Grid(grid.dimension, grid.mode, grid.L, grid.N); }

void ExperimentConfig::validate() const {
  try {
    validate_keyed(*this);
  } catch (const KeyedError& e) {
    throw ConfigError(e.key + ": " + e.message);
  }
}

ExperimentConfig parse_config(std::string_view text) {
  const Locator loc(text);
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), loc.line_at(e.byte > 0 ? e.byte - 1 : 0));
  }
  try {
    ExperimentConfig c = read_config(root);
    validate_keyed(c);
    return c;
  } catch (const KeyedError& e) {
    throw ConfigError(e.key + ": " + e.message, loc.line_of(e.key));
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"dimension", c.grid.dimension},
               {"mode", std::string(to_string(c.grid.mode))},
               {"L", c.grid.L},
               {"N", c.grid.N}};
  j["dt"] = c.dt;
  j["T"] = c.T;
  j["record_every"] = c.record_every;
  j["damping"] = {{"family", std::string(to_string(c.damping.family))}, {"V0", c.damping.V0}, {"alpha", c.damping.alpha}};
  if (c.cutoff_m) j["damping"]["cutoff_m"] = *c.cutoff_m;
  j["data"] = {{"u0", field_to_json(c.u0)}, {"u1", field_to_json(c.u1)}, {"zero_total", c.zero_total},
               {"envelope_width", c.envelope_width}, {"gamma", c.gamma}};
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.C_prop21) j["C_prop21"] = *c.C_prop21;
  j["shell_width"] = c.shell_width;
  j["test_functions"] = c.test_functions;
  if (c.fit_t_lo || c.fit_t_hi) j["fit_window"] = {c.fit_t_lo.value_or(0.1 * c.T), c.fit_t_hi.value_or(c.T)};
  j["output_path"] = c.output_path;
  j["rng_seed"] = c.rng_seed;
  return j;
}

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names() { return {"oracle", "theorem3d", "open2d", "expdamp"}; }

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "oracle") {
    // L = N sin(pi/N) makes the discrete wavenumber of mode 1 exactly 1, so
    // V0 = 2 is critically damped on the lattice as well.
    constexpr int N = 256;
    c.grid = {1, GridMode::periodic, N * std::sin(std::numbers::pi / N), N};
    c.dt = 1e-3;
    c.T = 5.0;
    c.record_every = 100;
    c.damping = {DampingFamily::constant, 2.0, 0.0};
    c.u0.family = "mode";
    c.u0.amplitude = 1.0;
    c.u0.index = 1;
    c.test_functions = 5;
    c.rng_seed = 7;
    c.output_path = "oracle.csv";
  } else if (name == "theorem3d") {
    c.grid = {3, GridMode::radial3d, 40.0, 4001};
    c.dt = 0.005;
    c.T = 100.0;
    c.record_every = 20;
    c.damping = {DampingFamily::polynomial, 1.0, 1.0};
    c.u0 = gaussian_spec(1.0, 1.0);
    c.u1 = gaussian_spec(0.5, 1.0);
    c.fit_t_lo = 10.0;
    c.fit_t_hi = 100.0;
    c.output_path = "theorem3d.csv";
  } else if (name == "open2d") {
    c.grid = {2, GridMode::box_dirichlet, 20.0, 401};
    c.dt = 0.05;
    c.T = 15.0;
    c.record_every = 2;
    c.damping = {DampingFamily::polynomial, 1.0, 1.0};
    c.u0 = gaussian_spec(1.0, 1.0);
    c.u1.family = "ricker";
    c.u1.amplitude = 1.0;
    c.u1.width = 1.0;
    c.zero_total = true;
    c.envelope_width = 2.0;
    c.gamma = 1.0;
    c.fit_t_lo = 1.5;
    c.fit_t_hi = 15.0;
    c.output_path = "open2d.csv";
  } else if (name == "expdamp") {
    c.grid = {3, GridMode::radial3d, 12.0, 1201};
    c.dt = 0.01;
    c.T = 20.0;
    c.record_every = 10;
    c.damping = {DampingFamily::exponential, 1.0, 0.0};
    c.u0 = gaussian_spec(1.0, 1.0);
    c.u1 = gaussian_spec(0.5, 1.0);
    c.fit_t_lo = 2.0;
    c.fit_t_hi = 20.0;
    c.output_path = "expdamp.csv";
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected oracle, theorem3d, open2d or expdamp)");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Building blocks

InitialData build_initial_data(const ExperimentConfig& c) {
  const Grid grid = c.make_grid();
  const ScalarField u0 = make_field(grid, c.u0);
  ScalarField u1 = make_field(grid, c.u1);
  if (c.zero_total)
    u1 = zero_total_compensation(u0, u1, c.damping, make_gaussian(grid, 1.0, {}, c.envelope_width));
  return compute_norms(u0, u1, c.damping, c.gamma);
}

Damping build_damping(const ExperimentConfig& c) { return Damping{c.damping, c.cutoff_m}; }

SeedConstants build_seed_constants(const ExperimentConfig& c, const InitialData& data) {
  const double eps = c.epsilon.value_or(0.5 * c.damping.V0);
  const double C = c.C_prop21 ? *c.C_prop21 : cached_prop21_constant(c.grid.dimension);
  return seed_constants(data.norms, c.damping.V0, eps, C);
}

// ---------------------------------------------------------------------------
// Runs

RunResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();

  const InitialData data = build_initial_data(c);
  const SeedConstants seeds = build_seed_constants(c, data);
  WaveState state = init_state(data, build_damping(c), c.dt);
  if (seeds.I00_sq > 0.0) state.blowup_norm = 1e6 * std::sqrt(seeds.I00_sq);
  const Grid& grid = state.grid();

  RunOptions opt;
  opt.T = c.T;
  opt.record_every = c.record_every;
  opt.shell_width = c.shell_width > 0.0 ? c.shell_width : 2.0 * grid.spacing();
  if (c.test_functions > 0) opt.test_functions = make_test_functions(grid, c.T, c.test_functions, c.rng_seed);

  RunResult out;
  out.history = run_until(state, data, seeds, opt);
  out.history.scenario = c.name;
  const RunHistory& h = out.history;

  RunReport& rep = out.report;
  rep.config = c;
  rep.seeds = seeds;
  rep.norms = data.norms;
  rep.assumption_A = verify_assumption_A(c.damping, grid).pass;
  rep.steps = h.steps;
  rep.dissipation_violations = h.dissipation_violations;
  rep.dissipation_max_increase = h.dissipation_max_increase;
  rep.bound_energy = summarize(bound_certificate(h, Quantity::energy));
  rep.bound_l2 = summarize(bound_certificate(h, Quantity::l2));
  rep.lemma21_sup = seeds.I0_sq > 0.0 ? lemma21_certificate(h).sup_ratio : 0.0;
  const double lo = c.fit_t_lo.value_or(0.1 * c.T), hi = c.fit_t_hi.value_or(c.T);
  rep.fit_energy = try_fit(h, Quantity::energy, lo, hi);
  rep.fit_l2 = try_fit(h, Quantity::l2, lo, hi);
  rep.max_residual_2_5 = max_abs(h.records, &EnergyRecord::residual_2_5);
  rep.max_residual_2_13 = max_abs(h.records, &EnergyRecord::residual_2_13);
  rep.max_residual_2_16 = max_abs(h.records, &EnergyRecord::residual_2_16);
  rep.weak_residuals = h.weak_residuals;
  rep.max_boundary = max_abs(h.records, &EnergyRecord::boundary);
  rep.pass = rep.assumption_A && rep.dissipation_violations == 0 && rep.bound_energy.pass && rep.bound_l2.pass;

  if (!c.output_path.empty()) {
    std::ofstream os(c.output_path);
    if (!os) throw Error("cannot write '" + c.output_path + "'");
    write_history_csv(os, h);
    if (!os) throw Error("write failed for '" + c.output_path + "'");
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

json report_to_json(const RunReport& r) {
  const SeedConstants& s = r.seeds;
  const DataNorms& n = r.norms;
  json j;
  j["config"] = config_to_json(r.config);
  j["seeds"] = {{"E0", s.E0},       {"I0_sq", s.I0_sq},     {"I1_sq", s.I1_sq},     {"I2_sq", s.I2_sq},
                {"I3_sq", s.I3_sq}, {"I00_sq", s.I00_sq}, {"epsilon", s.epsilon}, {"C_prop21", s.C_prop21}};
  j["norms"] = {{"l2_u0", n.l2_u0},         {"grad_u0", n.grad_u0},     {"l2_u1", n.l2_u1},
                {"l1_u1", n.l1_u1},         {"l1_a_u0", n.l1_a_u0},     {"l2_a_u0", n.l2_a_u0},
                {"pair_u1_u0", n.pair_u1_u0}, {"total_integral", n.total_integral},
                {"a_weighted_u0_sq", n.a_weighted_u0_sq}};
  j["assumption_A"] = r.assumption_A;
  j["steps"] = r.steps;
  j["dissipation"] = {{"violations", r.dissipation_violations}, {"max_relative_increase", r.dissipation_max_increase}};
  auto cert = [](const CertificateSummary& c) {
    return json{{"sup_ratio", c.sup_ratio}, {"t_sup", c.t_sup}, {"pass", c.pass}};
  };
  j["certificates"] = {{"energy", cert(r.bound_energy)}, {"l2", cert(r.bound_l2)}, {"lemma21_sup", r.lemma21_sup}};
  j["decay_fit"] = {{"energy", fit_to_json(r.fit_energy)}, {"l2", fit_to_json(r.fit_l2)}};
  j["residuals"] = {{"max_2_5", r.max_residual_2_5},
                    {"max_2_13", r.max_residual_2_13},
                    {"max_2_16", r.max_residual_2_16},
                    {"weak", r.weak_residuals}};
  j["max_boundary"] = r.max_boundary;
  j["pass"] = r.pass;
  return j;
}

void write_history_csv(std::ostream& os, const RunHistory& h) {
  os << "t,energy,l2_sq,damping_cum,damping_u_cum,residual_2_5,residual_2_13,residual_2_16,ratio_energy,ratio_l2,"
        "boundary\n";
  const auto old = os.precision(17);
  for (const EnergyRecord& r : h.records) {
    os << r.t << ',' << r.E << ',' << r.l2_sq << ',' << r.damping_cum << ',' << r.damping_u_cum << ','
       << r.residual_2_5 << ',' << r.residual_2_13 << ',' << r.residual_2_16 << ',' << r.ratio_energy << ','
       << r.ratio_l2 << ',' << r.boundary << '\n';
  }
  os.precision(old);
}

CsvColumns read_history_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("'" + path + "' is empty");
  const std::vector<std::string> header = split(line);
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidArgument("'" + path + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t it = find("t"), iv = find(column);
  CsvColumns out;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) throw InvalidArgument(path + ": row " + std::to_string(row) + " has the wrong width");
    try {
      out.t.push_back(std::stod(cells[it]));
      out.value.push_back(std::stod(cells[iv]));
    } catch (const std::exception&) {
      throw InvalidArgument(path + ": row " + std::to_string(row) + " is not numeric");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepKey sweep_key_from_string(std::string_view name) {
  if (name == "cutoff_m") return SweepKey::cutoff_m;
  if (name == "dt") return SweepKey::dt;
  if (name == "N") return SweepKey::N;
  if (name == "alpha") return SweepKey::alpha;
  throw ConfigError("cannot sweep '" + std::string(name) + "' (expected cutoff_m, dt, N or alpha)");
}

ExperimentConfig sweep_member(const ExperimentConfig& base, SweepKey key, double value) {
  ExperimentConfig c = base;
  std::string label;
  switch (key) {
    case SweepKey::cutoff_m:
      c.cutoff_m = value;
      label = "cutoff_m";
      break;
    case SweepKey::dt:
      // Keep the record times of the base run.
      c.record_every = std::max(1L, std::lround(static_cast<double>(base.record_every) * base.dt / value));
      c.dt = value;
      label = "dt";
      break;
    case SweepKey::N:
      if (value != std::floor(value) || value < 1) throw ConfigError("sweep: N must be a positive integer");
      c.grid.N = static_cast<Eigen::Index>(value);
      label = "N";
      break;
    case SweepKey::alpha:
      c.damping.alpha = value;
      label = "alpha";
      break;
  }
  std::ostringstream tag;
  tag << label << '=' << std::setprecision(12) << value;
  c.name = base.name + "_" + tag.str();
  if (!base.output_path.empty()) {
    const std::size_t dot = base.output_path.rfind('.');
    const std::size_t slash = base.output_path.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    c.output_path = has_ext ? base.output_path.substr(0, dot) + "_" + tag.str() + base.output_path.substr(dot)
                            : base.output_path + "_" + tag.str();
  }
  return c;
}

std::vector<RunReport> sweep(const ExperimentConfig& base, SweepKey key, const std::vector<double>& values,
                             int workers) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  std::vector<ExperimentConfig> members;
  for (double v : values) {
    members.push_back(sweep_member(base, key, v));
    members.back().validate();
  }
  std::vector<RunReport> reports(members.size());
  parallel_for(members.size(), workers, [&](std::size_t i) { reports[i] = run_experiment(members[i]).report; });
  return reports;
}

int workers_from_env() {
  const char* env = std::getenv("WAVELAB_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError("WAVELAB_WORKERS must be a positive integer");
  return static_cast<int>(std::min(n, 256L));
}

}  // namespace wavelab
