#pragma once

#include <string_view>

#include <Eigen/Core>

#include "wavelab/coefficients.hpp"
#include "wavelab/fields.hpp"

namespace wavelab {

/// h(t) = exp(-1/(1-t^2)) for |t| < 1, else 0.
double bump_profile(double t);

/// amplitude * exp(-|x-center|^2 / (2 width^2)). An empty center means the
/// origin; radial grids only accept the origin.
ScalarField make_gaussian(const Grid& grid, double amplitude, const Eigen::VectorXd& center, double width);

/// amplitude * h(|x-center|^2 / R^2); equals amplitude * e^{-1} at the center
/// and vanishes for |x-center| >= R.
ScalarField make_bump(const Grid& grid, double radius, double amplitude = 1.0,
                      const Eigen::VectorXd& center = {});

/// Mexican-hat profile proportional to -Laplacian of a Gaussian, scaled to
/// `amplitude` at the center. Its integral over R^n vanishes.
ScalarField make_ricker(const Grid& grid, double amplitude, const Eigen::VectorXd& center, double width);

/// amplitude * cos(pi * index * x_0 / L): a single lattice Fourier mode on
/// periodic grids.
ScalarField make_mode(const Grid& grid, double amplitude, int index);

/// Discrete convolution with the normalized mollifier rho_eps (kernel sums to
/// one under the nodal quadrature). Periodic grids wrap; box grids extend by
/// zero and keep the Dirichlet nodes at zero. Rejects eps < 2h and radial grids.
ScalarField mollify(const ScalarField& f, double eps);

/// Subtracts a multiple of `envelope` from u1 so that the quadrature of
/// a u0 + u1 vanishes.
ScalarField zero_total_compensation(const ScalarField& u0, const ScalarField& u1,
                                    const DampingCoefficient& a, const ScalarField& envelope);

struct DataNorms {
  double l2_u0 = 0.0;            // ||u0||
  double grad_u0 = 0.0;          // ||grad u0||
  double l2_u1 = 0.0;            // ||u1||
  double l1_u1 = 0.0;            // ||u1||_{1,gamma}
  double l1_a_u0 = 0.0;          // ||a u0||_{1,gamma}
  double l2_a_u0 = 0.0;          // ||a u0||
  double pair_u1_u0 = 0.0;       // (u1, u0)
  double total_integral = 0.0;   // int (a u0 + u1) dx
  double a_weighted_u0_sq = 0.0; // int a |u0|^2 dx
};

struct InitialData {
  ScalarField u0;
  ScalarField u1;
  DataNorms norms;
  double gamma = 0.0;
};

/// Quadrature of every data norm, in physical units over R^n (radial grids
/// include the 4*pi r^2 measure). Weighted L1 norms use (1+|x|)^gamma.
InitialData compute_norms(const ScalarField& u0, const ScalarField& u1, const DampingCoefficient& a,
                          double gamma = 0.0);

/// Data-dependent constants of the decay estimates.
struct SeedConstants {
  double E0 = 0.0;
  double I0_sq = 0.0;
  double I1_sq = 0.0;
  double I2_sq = 0.0;
  double I3_sq = 0.0;
  double I00_sq = 0.0;
  double epsilon = 0.0;
  double C_prop21 = 0.0;
};

/// Throws InvalidArgument unless 0 < eps < V0 and C_prop21 >= 0, or when a
/// constant would come out negative.
SeedConstants seed_constants(const DataNorms& norms, double V0, double eps, double C_prop21);

}  // namespace wavelab
