#pragma once

#include <string_view>
#include <vector>

#include "wavelab/functionals.hpp"

namespace wavelab {

enum class Quantity { energy, l2 };

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  long samples = 0;
};

/// Least-squares line of log(value) against log(1 + t) over t in [t_lo, t_hi].
/// Requires t_hi > t_lo >= 1, at least 10 samples in the window and positive
/// values there.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_lo, double t_hi);
DecayFit fit_decay(const RunHistory& history, Quantity quantity, double t_lo, double t_hi);

struct BoundCertificate {
  Quantity quantity = Quantity::energy;
  std::vector<double> t;
  std::vector<double> ratio;  // (1+t)^2 E / I2^2 or (1+t) ||u||^2 / I3^2
  double sup_ratio = 0.0;     // over t in [1, T]
  double t_sup = 0.0;
  bool pass = false;          // sup attained at t <= T/2
};

/// Ratio curve and boundedness surrogate. Throws when the constant is not
/// positive while the numerator is nonzero; all-zero runs pass with ratio 0.
BoundCertificate bound_certificate(const RunHistory& history, Quantity quantity);

/// |sup_fine / sup_coarse - 1| <= tolerance (both zero counts as stable).
bool sup_stable(const BoundCertificate& coarse, const BoundCertificate& fine, double tolerance = 0.2);

/// A run shared by every member of an m-sweep.
struct Scenario {
  InitialData data;
  DampingCoefficient damping;
  double dt = 0.0;
  double T = 0.0;
  long record_every = 1;
  SeedConstants seeds;
};

struct MConvergenceRow {
  double m = 0.0;
  double sup_error = 0.0;      // sup_t ||u_m - u_ref|| / max_t ||u_ref||
  double lemma21_sup = 0.0;    // sup_t (||u_m||^2 + int int a_m u_m^2) / I0^2
};

struct MConvergenceStudy {
  std::vector<MConvergenceRow> rows;
  double lemma21_sup_reference = 0.0;
  bool nonincreasing = false;
  bool strictly_decreasing = false;
};

/// Runs the scenario with cutoff damping a_m for each m and once with the
/// uncut coefficient as reference, comparing solutions at every time step.
/// `ms` must be strictly increasing. Members run on up to `workers` threads.
MConvergenceStudy m_convergence_study(const Scenario& scenario, const std::vector<double>& ms, int workers = 1);

struct UniformityReport {
  bool pass = false;
  double max = 0.0;
  double min = 0.0;
};

/// Passes iff max <= 1.25 min over at least three sup-ratios.
UniformityReport uniformity_check(const std::vector<double>& sup_ratios);

}  // namespace wavelab
