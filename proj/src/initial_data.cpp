#include "wavelab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace wavelab {

namespace {

Eigen::VectorXd resolve_center(const Grid& grid, const Eigen::VectorXd& center) {
  if (center.size() == 0) return Eigen::VectorXd::Zero(grid.dimension());
  if (center.size() != grid.dimension()) throw InvalidArgument("data: center has wrong dimension");
  if (grid.mode() == GridMode::radial3d && center.norm() != 0.0)
    throw InvalidArgument("data: radial3d grids only accept profiles centered at the origin");
  return center;
}

ScalarField finish(ScalarField f) {
  f.apply_dirichlet();
  return f;
}

}  // namespace

double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

ScalarField make_gaussian(const Grid& grid, double amplitude, const Eigen::VectorXd& center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("make_gaussian: width must be positive");
  const Eigen::VectorXd c = resolve_center(grid, center);
  const double inv = 1.0 / (2.0 * width * width);
  return finish(ScalarField::from_function(
      grid, [&](const Eigen::VectorXd& x) { return amplitude * std::exp(-(x - c).squaredNorm() * inv); }));
}

ScalarField make_bump(const Grid& grid, double radius, double amplitude, const Eigen::VectorXd& center) {
  if (!(radius > 0.0)) throw InvalidArgument("make_bump: radius must be positive");
  const Eigen::VectorXd c = resolve_center(grid, center);
  const double inv = 1.0 / (radius * radius);
  return finish(ScalarField::from_function(
      grid, [&](const Eigen::VectorXd& x) { return amplitude * bump_profile((x - c).squaredNorm() * inv); }));
}

ScalarField make_ricker(const Grid& grid, double amplitude, const Eigen::VectorXd& center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("make_ricker: width must be positive");
  const Eigen::VectorXd c = resolve_center(grid, center);
  const double n = grid.dimension();
  const double w2 = width * width;
  return finish(ScalarField::from_function(grid, [&](const Eigen::VectorXd& x) {
    const double q = (x - c).squaredNorm();
    return amplitude * (1.0 - q / (n * w2)) * std::exp(-q / (2.0 * w2));
  }));
}

ScalarField make_mode(const Grid& grid, double amplitude, int index) {
  if (grid.mode() == GridMode::radial3d) throw InvalidArgument("make_mode: not available on radial3d grids");
  const double k = std::numbers::pi * index / grid.half_extent();
  return finish(ScalarField::from_function(grid, [&](const Eigen::VectorXd& x) { return amplitude * std::cos(k * x[0]); }));
}

ScalarField mollify(const ScalarField& f, double eps) {
  const Grid& grid = f.grid();
  if (grid.mode() == GridMode::radial3d) throw InvalidArgument("mollify: radial3d grids are not supported");
  const double h = grid.spacing();
  if (!(eps >= 2.0 * h)) throw InvalidArgument("mollify: eps must be at least twice the grid spacing");

  const int rank = grid.rank();
  const Eigen::Index n = grid.points_per_axis();
  const auto reach = static_cast<Eigen::Index>(std::floor(eps / h));
  if (grid.mode() == GridMode::periodic && 2 * reach + 1 > n)
    throw InvalidArgument("mollify: kernel wider than the periodic grid");

  struct Tap {
    Eigen::Index offset[3];
    double weight;
  };
  std::vector<Tap> taps;
  double mass = 0.0;
  const Eigen::Index side = 2 * reach + 1;
  Eigen::Index count = 1;
  for (int d = 0; d < rank; ++d) count *= side;
  for (Eigen::Index k = 0; k < count; ++k) {
    Tap tap{{0, 0, 0}, 0.0};
    double r2 = 0.0;
    Eigen::Index rem = k;
    for (int d = 0; d < rank; ++d) {
      tap.offset[d] = rem % side - reach;
      rem /= side;
      const double y = static_cast<double>(tap.offset[d]) * h;
      r2 += y * y;
    }
    tap.weight = bump_profile(r2 / (eps * eps));
    if (tap.weight > 0.0) {
      mass += tap.weight;
      taps.push_back(tap);
    }
  }
  for (Tap& tap : taps) tap.weight /= mass;

  const bool periodic = grid.mode() == GridMode::periodic;
  ScalarField out(grid);
  for (Eigen::Index node = 0; node < grid.size(); ++node) {
    double acc = 0.0;
    for (const Tap& tap : taps) {
      Eigen::Index src = 0;
      bool inside = true;
      for (int d = 0; d < rank; ++d) {
        Eigen::Index j = grid.axis_index(node, d) - tap.offset[d];
        if (periodic) {
          j = ((j % n) + n) % n;
        } else if (j < 0 || j >= n) {
          inside = false;
          break;
        }
        src += j * grid.stride(d);
      }
      if (inside) acc += tap.weight * f[src];
    }
    out[node] = acc;
  }
  return finish(std::move(out));
}

ScalarField zero_total_compensation(const ScalarField& u0, const ScalarField& u1, const DampingCoefficient& a,
                                    const ScalarField& envelope) {
  u0.require_same_grid(u1);
  u0.require_same_grid(envelope);
  const Eigen::ArrayXd a_nodes = sample_damping(a, u0.grid());
  const double total = volume_integral(u0, a_nodes) + volume_integral(u1);
  const double env = volume_integral(envelope);
  if (env == 0.0) throw InvalidArgument("zero_total_compensation: envelope has zero integral");
  ScalarField out = u1;
  out.values() -= (total / env) * envelope.values();
  return out;
}

InitialData compute_norms(const ScalarField& u0, const ScalarField& u1, const DampingCoefficient& a, double gamma) {
  u0.require_same_grid(u1);
  if (!u0.all_finite() || !u1.all_finite()) throw InvalidArgument("compute_norms: non-finite initial data");
  const Grid& grid = u0.grid();
  const Eigen::ArrayXd a_nodes = sample_damping(a, grid);
  const Eigen::ArrayXd weight = (1.0 + grid.radii()).pow(gamma);

  const ScalarField a_u0(grid, a_nodes * u0.values());
  DataNorms n;
  n.l2_u0 = std::sqrt(volume_inner_product(u0, u0));
  n.grad_u0 = std::sqrt(volume_grad_inner(u0, u0));
  n.l2_u1 = std::sqrt(volume_inner_product(u1, u1));
  n.l1_u1 = volume_abs_integral(u1, weight);
  n.l1_a_u0 = volume_abs_integral(a_u0, weight);
  n.l2_a_u0 = std::sqrt(volume_inner_product(a_u0, a_u0));
  n.pair_u1_u0 = volume_inner_product(u1, u0);
  n.total_integral = volume_integral(u0, a_nodes) + volume_integral(u1);
  n.a_weighted_u0_sq = volume_inner_product(a_u0, u0);

  const double all[] = {n.l2_u0, n.grad_u0,    n.l2_u1,          n.l1_u1,          n.l1_a_u0,
                        n.l2_a_u0, n.pair_u1_u0, n.total_integral, n.a_weighted_u0_sq};
  for (double v : all)
    if (!std::isfinite(v)) throw InvalidArgument("compute_norms: non-finite integrand");
  return InitialData{u0, u1, n, gamma};
}

SeedConstants seed_constants(const DataNorms& n, double V0, double eps, double C_prop21) {
  if (!(V0 > 0.0)) throw InvalidArgument("seed_constants: V0 must be positive");
  if (!(eps > 0.0 && eps < V0)) throw InvalidArgument("seed_constants: epsilon must lie in (0, V0)");
  if (!(C_prop21 >= 0.0)) throw InvalidArgument("seed_constants: C_prop21 must be nonnegative");

  SeedConstants s;
  s.epsilon = eps;
  s.C_prop21 = C_prop21;
  s.E0 = 0.5 * (n.l2_u1 * n.l2_u1 + n.grad_u0 * n.grad_u0);
  s.I0_sq = n.l1_a_u0 * n.l1_a_u0 + n.l2_a_u0 * n.l2_a_u0 + n.l1_u1 * n.l1_u1 + n.l2_u1 * n.l2_u1;
  s.I1_sq = s.E0 * (1.0 + 1.0 / V0 + 1.0 / (2.0 * eps)) + 0.5 * n.pair_u1_u0;

  // Shared bracket of the (1+t)^2 E and (1+t)||u||^2 bounds.
  const double common = n.pair_u1_u0 + 0.5 * n.a_weighted_u0_sq + 0.5 * C_prop21 * s.I0_sq + s.I1_sq / eps;
  s.I2_sq = s.E0 + (2.0 / V0) * (s.E0 + s.I1_sq) + common;
  s.I3_sq = 2.0 / (V0 - eps) * (common + (s.E0 + s.I1_sq) / V0);
  s.I00_sq = n.l2_u0 * n.l2_u0 + n.grad_u0 * n.grad_u0 + n.l1_a_u0 * n.l1_a_u0 + n.l2_a_u0 * n.l2_a_u0 +
             n.l2_u1 * n.l2_u1 + n.l1_u1 * n.l1_u1;

  if (s.I1_sq < 0.0 || s.I2_sq < 0.0 || s.I3_sq < 0.0)
    throw InvalidArgument("seed_constants: (u1,u0) too negative, constants would be negative");
  return s;
}

}  // namespace wavelab
