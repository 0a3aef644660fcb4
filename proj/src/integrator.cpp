#include "wavelab/integrator.hpp"

#include <cmath>
#include <sstream>

namespace wavelab {

CflReport cfl_check(const Grid& grid, double dt) {
  CflReport report;
  report.dt_max = grid.spacing() / std::sqrt(static_cast<double>(grid.rank()));
  report.pass = dt >= 0.0 && dt <= report.dt_max * (1.0 + 1e-12);
  return report;
}

WaveState init_state(const InitialData& data, const Damping& damping, double dt) {
  data.u0.require_same_grid(data.u1);
  if (!(dt > 0.0)) throw InvalidArgument("init_state: dt must be positive");
  const CflReport cfl = cfl_check(data.u0.grid(), dt);
  if (!cfl.pass) {
    std::ostringstream msg;
    msg << "init_state: dt = " << dt << " violates the CFL bound dt <= " << cfl.dt_max;
    throw InvalidArgument(msg.str());
  }
  const Grid& grid = data.u0.grid();
  WaveState s{0.0, 0, dt, data.u0, data.u0, ScalarField(grid), damping, sample_damping(damping, grid)};
  const auto& u0 = data.u0.values();
  const auto& u1 = data.u1.values();
  const ScalarField lap = spatial_operator(data.u0);
  s.u_prev.values() = u0 - dt * u1 + 0.5 * dt * dt * (lap.values() - s.a_nodes * u1);
  s.u_prev.apply_dirichlet();
  return s;
}

ScalarField next_level(const WaveState& s) {
  const ScalarField lap = spatial_operator(s.u_curr);
  const double dt = s.dt;
  const Eigen::ArrayXd half_damp = 0.5 * dt * s.a_nodes;
  ScalarField next(s.grid());
  next.values() = (2.0 * s.u_curr.values() - s.u_prev.values() + dt * dt * lap.values() +
                   half_damp * s.u_prev.values()) /
                  (1.0 + half_damp);
  next.apply_dirichlet();
  if (!next.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite values at step " << s.k + 1;
    throw IntegrationError(msg.str());
  }
  if (std::isfinite(s.blowup_norm) && std::sqrt(volume_inner_product(next, next)) > s.blowup_norm) {
    std::ostringstream msg;
    msg << "blow-up guard tripped at step " << s.k + 1;
    throw IntegrationError(msg.str());
  }
  return next;
}

void commit(WaveState& s, ScalarField u_next) {
  s.W_accum.values() += 0.5 * s.dt * (s.u_curr.values() + u_next.values());
  s.u_prev = std::move(s.u_curr);
  s.u_curr = std::move(u_next);
  ++s.k;
  s.t = static_cast<double>(s.k) * s.dt;
}

WaveState step(const WaveState& state) {
  WaveState out = state;
  commit(out, next_level(state));
  return out;
}

ScalarField centered_velocity(const WaveState& s, const ScalarField& u_next) {
  return ScalarField(s.grid(), (u_next.values() - s.u_prev.values()) / (2.0 * s.dt));
}

double staggered_energy(const WaveState& s, const ScalarField& u_next) {
  const ScalarField diff(s.grid(), (u_next.values() - s.u_curr.values()) / s.dt);
  return 0.5 * volume_inner_product(diff, diff) + 0.5 * volume_grad_inner(u_next, s.u_curr);
}

namespace {

// sinh(x)/x and sin(x)/x without cancellation near zero.
std::complex<double> sinhc(std::complex<double> x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

}  // namespace

std::complex<double> exact_mode_solution(double k_abs, double V0, double t, std::complex<double> u0hat,
                                         std::complex<double> u1hat) {
  if (!(k_abs >= 0.0)) throw InvalidArgument("exact_mode_solution: k_abs must be nonnegative");
  const double half = 0.5 * V0;
  // Roots -V0/2 +- s with s^2 = V0^2/4 - k^2; s is imaginary when underdamped
  // and zero at critical damping, where sinhc reduces to the double-root form.
  const std::complex<double> s = std::sqrt(std::complex<double>(half * half - k_abs * k_abs, 0.0));
  const std::complex<double> st = s * t;
  return std::exp(-half * t) * (u0hat * std::cosh(st) + (u1hat + half * u0hat) * t * sinhc(st));
}

void advance_until(WaveState& state, double T, std::span<StepObserver* const> observers) {
  if (!(T >= state.t)) throw InvalidArgument("advance_until: target time is before the current time");
  const long last = state.k + std::lround((T - state.t) / state.dt);
  while (true) {
    ScalarField next = next_level(state);
    const ScalarField velocity = centered_velocity(state, next);
    const bool final = state.k >= last;
    const StepView view{state, next, velocity, final};
    for (StepObserver* obs : observers) obs->on_step(view);
    if (final) break;
    commit(state, std::move(next));
  }
}

void DissipationMonitor::on_step(const StepView& view) {
  const double e = staggered_energy(view.state, view.u_next);
  if (!std::isnan(previous_)) {
    const double scale = std::abs(previous_);
    const double increase = e - previous_;
    if (scale > 0.0) max_increase_ = std::max(max_increase_, increase / scale);
    else max_increase_ = std::max(max_increase_, increase);
    if (increase > slack_ * scale) ++violations_;
  }
  previous_ = e;
  ++steps_;
}

}  // namespace wavelab
