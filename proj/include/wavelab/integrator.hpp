#pragma once

#include <complex>
#include <limits>
#include <span>

#include <Eigen/Core>

#include "wavelab/coefficients.hpp"
#include "wavelab/fields.hpp"
#include "wavelab/initial_data.hpp"

namespace wavelab {

/// Two time levels of the leapfrog scheme plus the running integral
/// W(t) = int_0^t u ds (trapezoid in time).
struct WaveState {
  double t = 0.0;
  long k = 0;
  double dt = 0.0;
  ScalarField u_curr;
  ScalarField u_prev;
  ScalarField W_accum;
  Damping damping;
  Eigen::ArrayXd a_nodes;  // damping sampled on the grid
  double blowup_norm = std::numeric_limits<double>::infinity();

  const Grid& grid() const { return u_curr.grid(); }
};

struct CflReport {
  bool pass = false;
  double dt_max = 0.0;
};

/// Undamped leapfrog bound dt <= h / sqrt(rank). Damping is implicit and
/// never tightens it. Radial grids advance a 1-D lattice (rank 1).
CflReport cfl_check(const Grid& grid, double dt);

/// Sets u_curr = u0 and the ghost level
///   u_prev = u0 - dt u1 + dt^2/2 (Lap u0 - a u1),
/// which makes the centered velocity at t = 0 equal u1.
WaveState init_state(const InitialData& data, const Damping& damping, double dt);

/// The next level u^{k+1} from
///   (1 + a dt/2) u^{k+1} = 2u^k - u^{k-1} + dt^2 Lap u^k + (a dt/2) u^{k-1}.
/// Throws IntegrationError on non-finite values or when the blow-up guard trips.
ScalarField next_level(const WaveState& state);

/// Shifts the levels to u_next and advances t, k and W.
void commit(WaveState& state, ScalarField u_next);

/// One full time step.
WaveState step(const WaveState& state);

/// Centered velocity (u^{k+1} - u^{k-1}) / (2 dt).
ScalarField centered_velocity(const WaveState& state, const ScalarField& u_next);

/// E^{k+1/2} = 1/2 ||(u^{k+1}-u^k)/dt||^2 + 1/2 (grad u^{k+1}, grad u^k), in
/// physical units. Nonincreasing in k for any damping a >= 0.
double staggered_energy(const WaveState& state, const ScalarField& u_next);

/// Exact amplitude of y'' + V0 y' + k^2 y = 0 with y(0) = u0hat, y'(0) = u1hat.
std::complex<double> exact_mode_solution(double k_abs, double V0, double t, std::complex<double> u0hat,
                                         std::complex<double> u1hat);

/// Everything an observer may look at after u^{k+1} has been computed and
/// before the levels shift. `velocity` is the centered velocity at t_k.
struct StepView {
  const WaveState& state;
  const ScalarField& u_next;
  const ScalarField& velocity;
  bool final;
};

class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_step(const StepView& view) = 0;
};

/// Advances to T (rounded to whole steps), calling each observer at every
/// level k = 0..K. The state ends at level K.
void advance_until(WaveState& state, double T, std::span<StepObserver* const> observers);

/// Per-step check of the staggered energy decrease.
class DissipationMonitor : public StepObserver {
 public:
  explicit DissipationMonitor(double relative_slack = 1e-12) : slack_(relative_slack) {}
  void on_step(const StepView& view) override;

  long violations() const { return violations_; }
  /// Largest (E^{k+1/2} - E^{k-1/2}) / E^{k-1/2} seen; negative when the
  /// energy strictly decreased at every step.
  double max_relative_increase() const { return max_increase_; }
  long steps() const { return steps_; }
  bool ok() const { return violations_ == 0; }

 private:
  double slack_;
  double previous_ = std::numeric_limits<double>::quiet_NaN();
  double max_increase_ = -std::numeric_limits<double>::infinity();
  long violations_ = 0;
  long steps_ = 0;
};

}  // namespace wavelab
