#include "wavelab/functionals.hpp"

#include <cmath>
#include <random>

namespace wavelab {

// ---------------------------------------------------------------------------
// Test functions

namespace {

// p(s) = exp(q(s)) with q(s) = -1/(1 - s^4) on |s| < 1.
struct TimeBump {
  double value, first, second;
};

TimeBump time_bump(double s) {
  if (std::abs(s) >= 1.0) return {0.0, 0.0, 0.0};
  const double s2 = s * s;
  const double g = 1.0 - s2 * s2;
  const double p = std::exp(-1.0 / g);
  const double q1 = -4.0 * s * s2 / (g * g);
  const double q2 = -12.0 * s2 / (g * g) - 32.0 * s2 * s2 * s2 / (g * g * g);
  return {p, q1 * p, (q2 + q1 * q1) * p};
}

}  // namespace

double TestFunction::time_value(double t) const { return time_bump((t - t_center) / t_radius).value; }

double TestFunction::time_derivative(double t) const {
  return time_bump((t - t_center) / t_radius).first / t_radius;
}

double TestFunction::time_second_derivative(double t) const {
  return time_bump((t - t_center) / t_radius).second / (t_radius * t_radius);
}

ScalarField TestFunction::spatial(const Grid& grid) const {
  const double inv = 1.0 / (x_radius * x_radius);
  if (grid.mode() == GridMode::radial3d) {
    const double c = x_center.size() > 0 ? x_center[0] : 0.0;
    return ScalarField::from_function(grid, [&](const Eigen::VectorXd& x) {
      const double d = x[0] - c;
      return bump_profile(d * d * inv);
    });
  }
  const Eigen::VectorXd c = x_center.size() > 0 ? x_center : Eigen::VectorXd::Zero(grid.dimension());
  return ScalarField::from_function(
      grid, [&](const Eigen::VectorXd& x) { return bump_profile((x - c).squaredNorm() * inv); });
}

void TestFunction::validate(const Grid& grid, double T) const {
  if (!(t_radius > 0.0) || !(x_radius > 0.0)) throw InvalidArgument("test function: radii must be positive");
  if (t_center + t_radius > T * (1.0 + 1e-12))
    throw InvalidArgument("test function: time support exceeds the run horizon");
  const double inner = grid.half_extent() - 2.0 * grid.spacing();
  if (grid.mode() == GridMode::radial3d) {
    const double c = x_center.size() > 0 ? x_center[0] : 0.0;
    if (c - x_radius <= 0.0 || c + x_radius > inner)
      throw InvalidArgument("test function: radial support must lie inside (0, L)");
    return;
  }
  const Eigen::VectorXd c = x_center.size() > 0 ? x_center : Eigen::VectorXd::Zero(grid.dimension());
  if (c.size() != grid.dimension()) throw InvalidArgument("test function: center has wrong dimension");
  for (int d = 0; d < grid.dimension(); ++d)
    if (std::abs(c[d]) + x_radius > inner)
      throw InvalidArgument("test function: spatial support touches the boundary");
}

std::vector<TestFunction> make_test_functions(const Grid& grid, double T, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = grid.half_extent();
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    TestFunction phi;
    phi.t_center = T * 0.3 * unit(rng);
    phi.t_radius = T * (0.3 + 0.3 * unit(rng));
    phi.t_radius = std::min(phi.t_radius, 0.95 * T - phi.t_center);
    if (grid.mode() == GridMode::radial3d) {
      phi.x_radius = L * (0.1 + 0.15 * unit(rng));
      const double lo = phi.x_radius + 0.05 * L;
      const double hi = 0.9 * L - phi.x_radius;
      phi.x_center = Eigen::VectorXd::Constant(1, lo + (hi - lo) * unit(rng));
    } else {
      phi.x_radius = L * (0.2 + 0.2 * unit(rng));
      const double reach = 0.9 * L - phi.x_radius;
      phi.x_center = Eigen::VectorXd(grid.dimension());
      for (int d = 0; d < grid.dimension(); ++d) phi.x_center[d] = reach * (2.0 * unit(rng) - 1.0);
    }
    phi.validate(grid, T);
    out.push_back(std::move(phi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Energies

double total_energy(const WaveState& state, const ScalarField& velocity) {
  return 0.5 * volume_inner_product(velocity, velocity) + 0.5 * volume_grad_inner(state.u_curr, state.u_curr);
}

double total_energy(const WaveState& state) {
  const ScalarField next = next_level(state);
  return total_energy(state, centered_velocity(state, next));
}

namespace {

class EnergyMonitor : public StepObserver {
 public:
  EnergyMonitor(RunHistory& history, long record_every, double shell_width)
      : history_(history), record_every_(record_every), shell_(shell_width) {}

  void on_step(const StepView& view) override {
    const WaveState& s = view.state;
    const ScalarField& u = s.u_curr;
    const ScalarField& vel = view.velocity;
    const ScalarField a_u(s.grid(), s.a_nodes * u.values());
    const ScalarField a_vel(s.grid(), s.a_nodes * vel.values());

    const double damp = volume_inner_product(a_vel, vel);
    const double damp_u = volume_inner_product(a_u, u);
    const double grad = volume_grad_inner(u, u);
    const double speed = volume_inner_product(vel, vel);
    const double weight = 1.0 + s.t;

    if (s.k > 0) {
      const double half = 0.5 * s.dt;
      acc_.damping_cum += half * (prev_.damp + damp);
      acc_.damping_u_cum += half * (prev_.damp_u + damp_u);
      acc_.grad_cum += half * (prev_.grad + grad);
      acc_.grad_cum_w += half * (prev_.weight * prev_.grad + weight * grad);
      acc_.vel_cum += half * (prev_.speed + speed);
      acc_.vel_cum_w += half * (prev_.weight * prev_.speed + weight * speed);
    }
    prev_ = {damp, damp_u, grad, speed, weight};

    if (s.k == 0) {
      history_.initial.E0 = 0.5 * speed + 0.5 * grad;
      history_.initial.pair_u1_u0 = volume_inner_product(vel, u);
      history_.initial.a_u0_sq = damp_u;
      history_.initial.l2_u0_sq = volume_inner_product(u, u);
    }
    if (s.k % record_every_ == 0 || view.final) {
      EnergyRecord r = acc_;
      r.t = s.t;
      r.E = 0.5 * speed + 0.5 * grad;
      r.l2_sq = volume_inner_product(u, u);
      r.Wt_sq = r.l2_sq;
      r.grad_W_sq = volume_grad_inner(s.W_accum, s.W_accum);
      r.pair_ut_u = volume_inner_product(vel, u);
      r.a_u_sq = damp_u;
      r.boundary = boundary_activity(u, shell_);
      history_.records.push_back(r);
    }
    history_.steps = s.k;
  }

 private:
  struct Previous {
    double damp = 0.0, damp_u = 0.0, grad = 0.0, speed = 0.0, weight = 1.0;
  };
  RunHistory& history_;
  long record_every_;
  double shell_;
  EnergyRecord acc_;
  Previous prev_;
};

class WeakFormMonitor : public StepObserver {
 public:
  WeakFormMonitor(const std::vector<TestFunction>& phis, const InitialData& data, const WaveState& state)
      : phis_(phis) {
    const Grid& grid = state.grid();
    const ScalarField a_u0(grid, state.a_nodes * data.u0.values());
    for (const TestFunction& phi : phis_) {
      Terms terms{phi.spatial(grid), ScalarField(grid), ScalarField(grid), 0.0, 0.0};
      terms.lap = spatial_operator(terms.profile);
      terms.damped = ScalarField(grid, state.a_nodes * terms.profile.values());
      const double p0 = phi.time_value(0.0);
      const double dp0 = phi.time_derivative(0.0);
      terms.rhs = p0 * volume_inner_product(data.u1, terms.profile) -
                  dp0 * volume_inner_product(data.u0, terms.profile) + p0 * volume_inner_product(a_u0, terms.profile);
      terms_.push_back(std::move(terms));
    }
  }

  void on_step(const StepView& view) override {
    const WaveState& s = view.state;
    const double w = (s.k == 0 || view.final) ? 0.5 * s.dt : s.dt;
    for (std::size_t i = 0; i < phis_.size(); ++i) {
      Terms& terms = terms_[i];
      const TestFunction& phi = phis_[i];
      const double p = phi.time_value(s.t);
      const double dp = phi.time_derivative(s.t);
      const double ddp = phi.time_second_derivative(s.t);
      if (p == 0.0 && dp == 0.0 && ddp == 0.0) continue;
      const double integrand = ddp * volume_inner_product(s.u_curr, terms.profile) -
                               p * volume_inner_product(s.u_curr, terms.lap) -
                               dp * volume_inner_product(s.u_curr, terms.damped);
      terms.integral += w * integrand;
    }
  }

  std::vector<double> residuals() const {
    std::vector<double> out;
    for (const Terms& t : terms_) out.push_back(t.integral - t.rhs);
    return out;
  }

 private:
  struct Terms {
    ScalarField profile;
    ScalarField lap;
    ScalarField damped;
    double rhs;
    double integral;
  };
  const std::vector<TestFunction>& phis_;
  std::vector<Terms> terms_;
};

}  // namespace

RunHistory run_until(WaveState& state, const InitialData& data, const SeedConstants& seeds, const RunOptions& opt) {
  if (!(opt.T >= 0.0)) throw InvalidArgument("run_until: T must be nonnegative");
  if (opt.record_every < 1) throw InvalidArgument("run_until: record_every must be at least 1");
  if (static_cast<double>(opt.record_every) * state.dt > 0.1 * (1.0 + 1e-12))
    throw InvalidArgument("run_until: records too sparse, need record_every * dt <= 0.1");
  for (const TestFunction& phi : opt.test_functions) phi.validate(state.grid(), opt.T);

  RunHistory history;
  history.seeds = seeds;
  EnergyMonitor energy(history, opt.record_every, opt.shell_width);
  DissipationMonitor dissipation;
  WeakFormMonitor weak(opt.test_functions, data, state);

  std::vector<StepObserver*> observers{&energy, &dissipation};
  if (!opt.test_functions.empty()) observers.push_back(&weak);
  observers.insert(observers.end(), opt.observers.begin(), opt.observers.end());
  advance_until(state, opt.T, observers);

  history.dissipation_violations = dissipation.violations();
  history.dissipation_max_increase = dissipation.steps() > 1 ? dissipation.max_relative_increase() : 0.0;
  history.weak_residuals = weak.residuals();

  const std::vector<double> r25 = energy_identity_residual(history);
  const std::vector<double> r213 = identity_2_13_residual(history);
  const std::vector<double> r216 = identity_2_16_residual(history);
  for (std::size_t i = 0; i < history.records.size(); ++i) {
    EnergyRecord& rec = history.records[i];
    rec.residual_2_5 = r25[i];
    rec.residual_2_13 = r213[i];
    rec.residual_2_16 = r216[i];
    const double w = 1.0 + rec.t;
    rec.ratio_energy = seeds.I2_sq > 0.0 ? w * w * rec.E / seeds.I2_sq : 0.0;
    rec.ratio_l2 = seeds.I3_sq > 0.0 ? w * rec.l2_sq / seeds.I3_sq : 0.0;
  }
  return history;
}

std::vector<double> energy_identity_residual(const RunHistory& h) {
  std::vector<double> out;
  out.reserve(h.records.size());
  for (const EnergyRecord& r : h.records) out.push_back(r.E + r.damping_cum - h.initial.E0);
  return out;
}

std::vector<double> identity_2_13_residual(const RunHistory& h) {
  std::vector<double> out;
  out.reserve(h.records.size());
  for (const EnergyRecord& r : h.records)
    out.push_back(r.grad_cum + 0.5 * r.a_u_sq - r.vel_cum + r.pair_ut_u - h.initial.pair_u1_u0 -
                  0.5 * h.initial.a_u0_sq);
  return out;
}

std::vector<double> identity_2_16_residual(const RunHistory& h) {
  std::vector<double> out;
  out.reserve(h.records.size());
  for (const EnergyRecord& r : h.records) {
    const double w = 1.0 + r.t;
    const double lhs = 0.5 * h.initial.l2_u0_sq + r.grad_cum_w + 0.5 * w * r.a_u_sq;
    const double rhs = -w * r.pair_ut_u + h.initial.pair_u1_u0 + 0.5 * r.l2_sq + 0.5 * r.damping_u_cum +
                       0.5 * h.initial.a_u0_sq + r.vel_cum_w;
    out.push_back(lhs - rhs);
  }
  return out;
}

Lemma21Certificate lemma21_certificate(const RunHistory& h) {
  Lemma21Certificate cert;
  for (const EnergyRecord& r : h.records) {
    const double lhs = r.l2_sq + r.damping_u_cum;
    if (h.seeds.I0_sq <= 0.0 && lhs != 0.0)
      throw InvalidArgument("lemma21_certificate: I0^2 vanishes while the left side does not");
    const double ratio = h.seeds.I0_sq > 0.0 ? lhs / h.seeds.I0_sq : 0.0;
    cert.lhs.push_back(lhs);
    cert.ratio.push_back(ratio);
    cert.sup_ratio = std::max(cert.sup_ratio, ratio);
  }
  return cert;
}

double weak_form_residual(const RunHistory& h, std::size_t i) {
  if (i >= h.weak_residuals.size()) throw InvalidArgument("weak_form_residual: no such test function in this run");
  return h.weak_residuals[i];
}

}  // namespace wavelab
