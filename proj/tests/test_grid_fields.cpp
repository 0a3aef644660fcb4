#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wavelab/fields.hpp"

using namespace wavelab;

namespace {

ScalarField random_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(grid);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = dist(rng);
  f.apply_dirichlet();
  return f;
}

}  // namespace

TEST_CASE("grid geometry") {
  CHECK(Grid(1, GridMode::box_dirichlet, 1.0, 201).spacing() == doctest::Approx(0.01));
  CHECK(Grid(2, GridMode::periodic, 1.0, 100).spacing() == doctest::Approx(0.02));
  CHECK(Grid(3, GridMode::radial3d, 10.0, 101).spacing() == doctest::Approx(0.1));
  CHECK(Grid(3, GridMode::box_dirichlet, 1.0, 9).size() == 729);
  CHECK(Grid(3, GridMode::radial3d, 1.0, 9).size() == 9);
  CHECK(Grid(3, GridMode::radial3d, 1.0, 9).rank() == 1);
  CHECK(grid_mode_from_string("periodic") == GridMode::periodic);
  CHECK_THROWS_AS(Grid(1, GridMode::box_dirichlet, 1.0, 7), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, GridMode::box_dirichlet, 0.0, 64), InvalidArgument);
  CHECK_THROWS_AS(Grid(4, GridMode::periodic, 1.0, 64), InvalidArgument);
  CHECK_THROWS_AS(Grid(2, GridMode::radial3d, 1.0, 64), InvalidArgument);
}

TEST_CASE("laplacian of a constant vanishes on periodic grids") {
  const Grid grid(2, GridMode::periodic, 3.0, 16);
  CHECK(laplacian(ScalarField::constant(grid, 4.2)).values().abs().maxCoeff() < 1e-12);
}

TEST_CASE("sine is an eigenvector of the circulant stencil") {
  const Grid grid(1, GridMode::periodic, 2.0, 32);
  const double L = grid.half_extent(), h = grid.spacing();
  const ScalarField f =
      ScalarField::from_function(grid, [&](const Eigen::VectorXd& x) { return std::sin(std::numbers::pi * x[0] / L); });
  const double k2 = (2.0 - 2.0 * std::cos(std::numbers::pi * h / L)) / (h * h);

  // Oracle: the dense circulant matrix applied directly.
  const Eigen::Index n = grid.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = -2.0 / (h * h);
    A(i, (i + 1) % n) += 1.0 / (h * h);
    A(i, (i + n - 1) % n) += 1.0 / (h * h);
  }
  const Eigen::VectorXd dense = A * f.values().matrix();
  const ScalarField lap = laplacian(f);
  CHECK((lap.values().matrix() - dense).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((lap.values() + k2 * f.values()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("stencil weights around a spike") {
  const Grid grid(1, GridMode::box_dirichlet, 4.0, 9);  // h = 1
  ScalarField f(grid);
  f[4] = 1.0;
  const ScalarField lap = laplacian(f);
  CHECK(lap[3] == 1.0);
  CHECK(lap[4] == -2.0);
  CHECK(lap[5] == 1.0);
  CHECK(lap[2] == 0.0);
  CHECK_THROWS_AS(laplacian(ScalarField(Grid(3, GridMode::radial3d, 1.0, 16))), InvalidArgument);
}

TEST_CASE("inner product quadrature") {
  const Grid box(1, GridMode::box_dirichlet, 1.0, 201);
  const ScalarField one = ScalarField::constant(box, 1.0);
  CHECK(inner_product(one, ScalarField(box)) == 0.0);
  CHECK(inner_product(one, one) == doctest::Approx(2.0).epsilon(1e-12));

  const Grid fine(1, GridMode::box_dirichlet, 8.0, 1601);
  const ScalarField g = ScalarField::from_function(fine, [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x[0] * x[0]); });
  CHECK(std::abs(inner_product(g, g) - std::sqrt(std::numbers::pi)) < 1e-6);
  CHECK_THROWS_AS(inner_product(one, g), InvalidArgument);
}

TEST_CASE("inner product is bilinear and positive") {
  const Grid grid(2, GridMode::periodic, 1.0, 16);
  const ScalarField f = random_field(grid, 1), g = random_field(grid, 2), k = random_field(grid, 3);
  ScalarField comb = f;
  comb *= 2.0;
  comb += g;
  CHECK(inner_product(comb, k) == doctest::Approx(2.0 * inner_product(f, k) + inner_product(g, k)).epsilon(1e-12));
  CHECK(inner_product(f, f) > 0.0);
  CHECK(inner_product(f, g) == doctest::Approx(inner_product(g, f)).epsilon(1e-14));
}

TEST_CASE("gradient quadrature") {
  CHECK(grad_norm_sq(ScalarField::constant(Grid(2, GridMode::periodic, 1.0, 16), 3.0)) == 0.0);
  const Grid unit(1, GridMode::box_dirichlet, 0.5, 101);
  const ScalarField x = ScalarField::from_function(unit, [](const Eigen::VectorXd& p) { return p[0]; });
  CHECK(grad_norm_sq(x) == doctest::Approx(1.0).epsilon(1e-12));

  const Grid fine(1, GridMode::box_dirichlet, 8.0, 3201);
  const ScalarField g = ScalarField::from_function(fine, [](const Eigen::VectorXd& p) { return std::exp(-0.5 * p[0] * p[0]); });
  CHECK(std::abs(grad_norm_sq(g) - 0.5 * std::sqrt(std::numbers::pi)) < 1e-5);
}

TEST_CASE("summation by parts is exact") {
  for (const Grid& grid : {Grid(1, GridMode::periodic, 1.0, 32), Grid(2, GridMode::periodic, 2.0, 24),
                           Grid(3, GridMode::periodic, 1.0, 10), Grid(1, GridMode::box_dirichlet, 1.0, 33),
                           Grid(2, GridMode::box_dirichlet, 1.5, 21), Grid(3, GridMode::box_dirichlet, 1.0, 11),
                           Grid(3, GridMode::radial3d, 4.0, 65)}) {
    const ScalarField f = random_field(grid, 11);
    const double lhs = -inner_product(spatial_operator(f), f);
    CHECK(lhs == doctest::Approx(grad_norm_sq(f)).epsilon(1e-12));
  }
}

TEST_CASE("laplacian is symmetric on periodic grids") {
  const Grid grid(2, GridMode::periodic, 1.0, 20);
  const ScalarField f = random_field(grid, 5), g = random_field(grid, 6);
  CHECK(inner_product(laplacian(f), g) == doctest::Approx(inner_product(f, laplacian(g))).epsilon(1e-12));
}

TEST_CASE("boundary activity") {
  const Grid box(1, GridMode::box_dirichlet, 8.0, 161);
  const double shell = 0.5;
  const ScalarField inner = ScalarField::from_function(box, [](const Eigen::VectorXd& x) { return std::abs(x[0]) < 4.0 ? 1.0 : 0.0; });
  CHECK(boundary_activity(inner, 0.8) == 0.0);
  CHECK(boundary_activity(ScalarField::constant(box, 1.0), shell) == 1.0);
  const ScalarField g = ScalarField::from_function(box, [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x[0] * x[0]); });
  CHECK(boundary_activity(g, shell) <= std::exp(-0.5 * 7.5 * 7.5) * (1 + 1e-12));
  CHECK(boundary_activity(g, shell) > 0.0);
  CHECK(boundary_activity(ScalarField::constant(Grid(1, GridMode::periodic, 1.0, 16), 1.0), shell) == 0.0);

  const Grid radial(3, GridMode::radial3d, 8.0, 161);
  const ScalarField gr = ScalarField::from_function(radial, [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm()); });
  CHECK(boundary_activity(gr, shell) <= std::exp(-0.5 * 7.5 * 7.5) * (1 + 1e-9));
  CHECK(boundary_activity(gr, shell) >= std::exp(-0.5 * 7.55 * 7.55));
}

TEST_CASE("radial lattice reconstructs three-dimensional integrals") {
  const Grid grid(3, GridMode::radial3d, 10.0, 2001);
  const ScalarField v = ScalarField::from_function(grid, [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm()); });
  CHECK(v[0] == 0.0);
  CHECK(v[1] == doctest::Approx(grid.spacing() * std::exp(-0.5 * grid.spacing() * grid.spacing())));
  const double pi = std::numbers::pi;
  // int e^{-|x|^2} dx = pi^{3/2}; int |grad e^{-|x|^2/2}|^2 dx = (3/2) pi^{3/2}.
  CHECK(volume_inner_product(v, v) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-8));
  CHECK(volume_grad_inner(v, v) == doctest::Approx(1.5 * std::pow(pi, 1.5)).epsilon(1e-5));
  // int e^{-|x|^2/2} dx = (2 pi)^{3/2}.
  CHECK(volume_integral(v) == doctest::Approx(std::pow(2 * pi, 1.5)).epsilon(1e-8));
}

TEST_CASE("csv snapshot") {
  const Grid grid(2, GridMode::periodic, 1.0, 8);
  std::ostringstream os;
  write_csv(os, ScalarField::constant(grid, 0.5));
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x0,x1,value");
  long rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == grid.size());
}
