#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wavelab/error.hpp"

namespace wavelab {

class Grid;

enum class DampingFamily { constant, polynomial, exponential };

std::string_view to_string(DampingFamily family);
DampingFamily damping_family_from_string(std::string_view name);

/// Radial damping coefficient a(x) with a declared uniform lower bound V0.
///
/// The family is a closed set so that the lower bound can be checked and
/// values are exactly reproducible:
///   constant     a(x) = V0
///   polynomial   a(x) = (1 + |x|^2)^(alpha/2)
///   exponential  a(x) = exp(|x|)
struct DampingCoefficient {
  DampingFamily family = DampingFamily::constant;
  double V0 = 1.0;
  double alpha = 0.0;

  /// Throws InvalidArgument unless V0 > 0 and alpha >= 0.
  void validate() const;
};

/// Continuous cutoff a_m: equals the base coefficient on |x| <= m, V0 on
/// |x| >= m + 1, and blends linearly in between.
struct CutoffDamping {
  DampingCoefficient base;
  double m = 1.0;

  void validate() const;
};

/// a(|x|) for a radial coefficient.
double eval_damping_radial(const DampingCoefficient& coeff, double r);

template <typename Derived>
double eval_damping(const DampingCoefficient& coeff, const Eigen::MatrixBase<Derived>& x) {
  return eval_damping_radial(coeff, x.norm());
}

double eval_cutoff_radial(const CutoffDamping& cd, double r);

template <typename Derived>
double eval_cutoff(const CutoffDamping& cd, const Eigen::MatrixBase<Derived>& x) {
  return eval_cutoff_radial(cd, x.norm());
}

/// Either the full coefficient or one of its cutoffs; what a run integrates with.
struct Damping {
  DampingCoefficient coefficient;
  std::optional<double> cutoff_m;

  double V0() const { return coefficient.V0; }
  double operator()(double r) const;
};

/// Nodal samples of the damping on a grid (radial argument |x| per node).
Eigen::ArrayXd sample_damping(const Damping& damping, const Grid& grid);
Eigen::ArrayXd sample_damping(const DampingCoefficient& coeff, const Grid& grid);

struct AssumptionReport {
  bool pass = false;
  double min_value = 0.0;
  Eigen::Index argmin = 0;
  std::vector<Eigen::Index> violating_nodes;
};

/// Checks V0 <= a(x) at every node, with 1e-12 relative slack.
AssumptionReport verify_assumption_A(const DampingCoefficient& coeff, const Grid& grid);

/// |a_m(x) - a(x)| for each radius (rows) and cutoff radius (columns).
Eigen::MatrixXd cutoff_pointwise_convergence(const DampingCoefficient& coeff,
                                             const std::vector<double>& radii,
                                             const std::vector<double>& ms);

}  // namespace wavelab
