#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wavelab/initial_data.hpp"
#include "wavelab/integrator.hpp"

namespace wavelab {

/// One sample of the energy functionals along a run. All integrals are in
/// physical units over R^n; cumulative time integrals use the trapezoid
/// rule on every time step.
struct EnergyRecord {
  double t = 0.0;
  double E = 0.0;              // 1/2 (||u_t||^2 + ||grad u||^2), centered velocity
  double l2_sq = 0.0;          // ||u||^2
  double damping_cum = 0.0;    // int_0^t int a |u_s|^2
  double damping_u_cum = 0.0;  // int_0^t int a |u|^2
  double grad_W_sq = 0.0;      // ||grad W||^2
  double Wt_sq = 0.0;          // ||W_t||^2 with W_t = u
  double pair_ut_u = 0.0;      // (u_t, u)
  double a_u_sq = 0.0;         // int a |u(t)|^2
  double grad_cum = 0.0;       // int_0^t ||grad u||^2
  double grad_cum_w = 0.0;     // int_0^t (1+s) ||grad u||^2
  double vel_cum = 0.0;        // int_0^t ||u_s||^2
  double vel_cum_w = 0.0;      // int_0^t (1+s) ||u_s||^2
  double residual_2_5 = 0.0;
  double residual_2_13 = 0.0;
  double residual_2_16 = 0.0;
  double ratio_energy = 0.0;   // (1+t)^2 E / I2^2
  double ratio_l2 = 0.0;       // (1+t) ||u||^2 / I3^2
  double boundary = 0.0;       // boundary_activity of u
};

/// Values at t = 0 the identities are measured against.
struct InitialTerms {
  double E0 = 0.0;             // recorded energy at t = 0
  double pair_u1_u0 = 0.0;     // (u1, u0)
  double a_u0_sq = 0.0;        // int a_m |u0|^2 (run damping)
  double l2_u0_sq = 0.0;       // ||u0||^2
};

struct RunHistory {
  std::string scenario;
  SeedConstants seeds;
  InitialTerms initial;
  std::vector<EnergyRecord> records;
  std::vector<double> weak_residuals;  // one per test function
  long dissipation_violations = 0;
  double dissipation_max_increase = 0.0;
  long steps = 0;
};

/// Smooth compactly supported phi(t,x) = p((t - t_center)/t_radius) P(x) with
/// p(s) = h(s^2) and P the spatial bump h(|x - c|^2 / R^2). On radial grids
/// c is a radius and P depends on (r - c).
struct TestFunction {
  double t_center = 0.0;
  double t_radius = 1.0;
  Eigen::VectorXd x_center;
  double x_radius = 1.0;

  /// Time profile and its first two derivatives at t.
  double time_value(double t) const;
  double time_derivative(double t) const;
  double time_second_derivative(double t) const;
  /// Spatial profile on the grid, lifted to v-units on radial grids.
  ScalarField spatial(const Grid& grid) const;
  /// Throws InvalidArgument when the support leaves the inner domain or
  /// extends past the run horizon T.
  void validate(const Grid& grid, double T) const;
};

/// Seeded family of test functions inside the domain and the horizon.
std::vector<TestFunction> make_test_functions(const Grid& grid, double T, int count, std::uint64_t seed);

/// 1/2 ||velocity||^2 + 1/2 ||grad u_curr||^2 using the centered velocity.
double total_energy(const WaveState& state);
double total_energy(const WaveState& state, const ScalarField& velocity);

struct RunOptions {
  double T = 0.0;
  long record_every = 1;
  double shell_width = 0.0;
  std::vector<TestFunction> test_functions;
  std::vector<StepObserver*> observers;  // extra observers, not owned
};

/// Advances `state` to T, recording every record_every steps and at the final
/// step. Requires record_every * dt <= 0.1.
RunHistory run_until(WaveState& state, const InitialData& data, const SeedConstants& seeds,
                     const RunOptions& options);

/// E(t) + int_0^t int a |u_s|^2 - E(0) per record.
std::vector<double> energy_identity_residual(const RunHistory& history);

/// Time-integrated multiplier identity for (w_t, w):
///   int ||grad w||^2 + 1/2 int a|w(t)|^2 - int ||w_s||^2 + (w_t, w)(t)
///     - (u1, u0) - 1/2 int a |u0|^2.
std::vector<double> identity_2_13_residual(const RunHistory& history);

/// LHS - RHS of the (1+t)-weighted multiplier identity.
std::vector<double> identity_2_16_residual(const RunHistory& history);

struct Lemma21Certificate {
  std::vector<double> lhs;    // ||u||^2 + int_0^t int a |u|^2
  std::vector<double> ratio;  // lhs / I0^2
  double sup_ratio = 0.0;
};

Lemma21Certificate lemma21_certificate(const RunHistory& history);

/// Quadrature residual of the weak formulation for one test function; read
/// from the history, where run_until stored it.
double weak_form_residual(const RunHistory& history, std::size_t test_function_index);

}  // namespace wavelab
