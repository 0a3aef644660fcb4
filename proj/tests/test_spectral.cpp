#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField random_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  ScalarField f(grid);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

ScalarField gaussian(const Grid& grid, double shift = 0.0) {
  return ScalarField::from_function(grid, [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y[0] -= shift;
    return std::exp(-0.5 * y.squaredNorm());
  });
}

}  // namespace

TEST_CASE("transform of a Gaussian is a Gaussian") {
  const Grid grid(1, GridMode::periodic, 10.0, 256);
  const Spectrum s = forward_transform(gaussian(grid));
  double err = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    err = std::max(err, std::abs(s.values[k] - std::exp(-0.5 * s.frequency(k).squaredNorm())));
  CHECK(err <= 1e-8);
  CHECK(s.dxi() == doctest::Approx(pi / 10.0));
}

TEST_CASE("transform agrees with the direct quadrature sum") {
  const Grid grid(2, GridMode::periodic, 3.0, 16);
  const ScalarField f = random_field(grid, 4);
  const Spectrum s = forward_transform(f);
  const double h = grid.spacing();
  double err = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const Eigen::VectorXd xi = s.frequency(k);
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) sum += std::polar(f[i], -grid.point(i).dot(xi));
    err = std::max(err, std::abs(s.values[k] - sum * h * h / (2.0 * pi)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("zero field and real-field symmetry") {
  const Grid grid(3, GridMode::periodic, 2.0, 8);
  CHECK(forward_transform(ScalarField(grid)).values.abs().maxCoeff() == 0.0);
  const Grid line(1, GridMode::periodic, 4.0, 32);
  const Spectrum s = forward_transform(random_field(line, 9));
  // j and -j sit at i and N - i; the Nyquist entry has no partner.
  for (Eigen::Index i = 1; i < 16; ++i) CHECK(std::abs(s.values[i] - std::conj(s.values[32 - i])) < 1e-12);
}

TEST_CASE("Plancherel") {
  for (const Grid& grid : {Grid(1, GridMode::periodic, 5.0, 64), Grid(2, GridMode::periodic, 5.0, 32),
                           Grid(3, GridMode::periodic, 5.0, 16)}) {
    const ScalarField f = random_field(grid, 21);
    const double l2 = inner_product(f, f);
    CHECK(std::abs(forward_transform(f).l2_sq() - l2) <= 1e-10 * l2);
  }
}

TEST_CASE("lattice zeta against closed forms") {
  CHECK(lattice_zeta(1, 0.5) == doctest::Approx(-2.9207090176).epsilon(1e-8));  // 2 zeta(1/2)
  CHECK(lattice_zeta(2, 1.0) == doctest::Approx(-3.9002649200).epsilon(1e-7));  // 4 zeta(1/2) beta(1/2)
  CHECK(lattice_zeta(3, 2.0) == doctest::Approx(-8.9136329).epsilon(1e-7));
  for (int n = 1; n <= 3; ++n) CHECK(lattice_zeta(n, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lattice_zeta(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(lattice_zeta(2, -0.5), InvalidArgument);
}

TEST_CASE("Riesz integral") {
  const Grid grid(2, GridMode::periodic, 16.0, 128);
  const ScalarField f = gaussian(grid, 0.5);
  const Spectrum s = forward_transform(f);
  CHECK(riesz_weighted_integral(s, 0.0) == doctest::Approx(inner_product(f, f)).epsilon(1e-12));
  CHECK(riesz_weighted_integral(forward_transform(ScalarField(grid)), 0.5) == 0.0);
  // int e^{-|xi|^2} |xi|^{-1} dxi over R^2 = pi^{3/2}.
  const double exact = std::pow(pi, 1.5);
  const double corrected = riesz_weighted_integral(s, 0.5);
  const double excluded = riesz_weighted_integral(s, 0.5, ZeroMode::excluded);
  CHECK(corrected == doctest::Approx(exact).epsilon(5e-3));
  CHECK(std::abs(corrected - exact) < std::abs(excluded - exact));
}

TEST_CASE("weighted L1 norm") {
  const Grid grid(1, GridMode::periodic, 30.0, 30000);
  const ScalarField f = ScalarField::from_function(grid, [](const Eigen::VectorXd& x) { return std::exp(-std::abs(x[0])); });
  CHECK(std::abs(weighted_l1_norm(f, 0.0) - 2.0) < 1e-6);
  CHECK(weighted_l1_norm(f, 1.0) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(weighted_l1_norm(ScalarField(grid), 0.5) == 0.0);
}

TEST_CASE("mean-zero projection") {
  const Grid grid(1, GridMode::periodic, 10.0, 200);
  CHECK(project_mean_zero(ScalarField::constant(grid, 3.0)).values().abs().maxCoeff() < 1e-14);
  const ScalarField dipole = gaussian(grid, 1.0) - gaussian(grid, -1.0);
  CHECK((project_mean_zero(dipole).values() - dipole.values()).abs().maxCoeff() < 1e-12);
  CHECK(std::abs(volume_integral(project_mean_zero(gaussian(grid)))) < 1e-12);
}

TEST_CASE("inequality checks") {
  const Grid grid(3, GridMode::periodic, 8.0, 32);
  const ScalarField f = gaussian(grid, 0.7);
  SUBCASE("zero data") {
    const Prop21Check c = check_part1(ScalarField(grid), 1.0, 0.0);
    CHECK(c.lhs == 0.0);
    CHECK(c.ratio == 0.0);
  }
  SUBCASE("homogeneity") {
    const Prop21Check a = check_part1(f, 1.0, 0.0);
    const Prop21Check b = check_part1(-3.0 * ScalarField(f), 1.0, 0.0);
    CHECK(b.lhs == doctest::Approx(9.0 * a.lhs).epsilon(1e-12));
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
  }
  SUBCASE("theta range") {
    CHECK_THROWS_AS(check_part1(f, 1.5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(check_part1(f, -0.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(check_part1(f, 1.0, 1.5), InvalidArgument);
    CHECK_NOTHROW(check_part2(project_mean_zero(f), 2.0, 1.0));
    CHECK_THROWS_AS(check_part2(project_mean_zero(f), 2.5, 1.0), InvalidArgument);
  }
  SUBCASE("part 2 needs mean-zero data") {
    CHECK_THROWS_AS(check_part2(f, 1.0, 1.0), InvalidArgument);
    CHECK_NOTHROW(check_part2(f, 1.0, 1.0, true));
    CHECK(check_part2(ScalarField(grid), 1.0, 1.0).ratio == 0.0);
  }
  SUBCASE("sample terms") {
    const SpectralSample s = make_spectral_sample(f, 1.0, 0.0, Prop21Part::part1);
    CHECK(s.l2_sq == doctest::Approx(inner_product(f, f)));
    CHECK(s.rhs_part1 == doctest::Approx(s.l1_gamma * s.l1_gamma + s.mean_integral * s.mean_integral + s.l2_sq));
    CHECK(s.plancherel_error < 1e-12);
    // int e^{-|x|^2/2} over R^3 = (2 pi)^{3/2}
    CHECK(s.mean_integral == doctest::Approx(std::pow(2.0 * pi, 1.5)).epsilon(1e-10));
  }
}

TEST_CASE("empirical constant") {
  const Grid grid(2, GridMode::periodic, 8.0, 32);
  const std::vector<ScalarField> family = gaussian_family(grid, 6, 5);
  REQUIRE(family.size() == 6);
  const ConstantEstimate c = estimate_constant(family, 0.5, 0.0, Prop21Part::part1);
  CHECK(c.ratios.size() == 6);
  CHECK(c.C_emp == doctest::Approx(*std::max_element(c.ratios.begin(), c.ratios.end())));
  std::vector<ScalarField> scaled;
  for (const ScalarField& f : family) scaled.push_back(7.5 * ScalarField(f));
  CHECK(estimate_constant(scaled, 0.5, 0.0, Prop21Part::part1).C_emp == doctest::Approx(c.C_emp).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_constant({}, 0.5, 0.0, Prop21Part::part1), InvalidArgument);
  CHECK(estimate_constant({ScalarField(grid)}, 0.5, 0.0, Prop21Part::part1).C_emp == 0.0);
  for (const ScalarField& d : dipole_family(grid, 4, 2)) CHECK(std::abs(volume_integral(d)) < 1e-12);
}

TEST_CASE("empirical constant is stable under resolution doubling") {
  const double coarse = estimate_constant(gaussian_family(Grid(3, GridMode::periodic, 10.0, 32), 6, 3), 1.0, 0.0,
                                          Prop21Part::part1).C_emp;
  const double fine = estimate_constant(gaussian_family(Grid(3, GridMode::periodic, 10.0, 64), 6, 3), 1.0, 0.0,
                                        Prop21Part::part1).C_emp;
  CHECK(std::abs(fine / coarse - 1.0) <= 0.10);
}

TEST_CASE("domain doubling separates convergent from divergent weights") {
  const Grid base(1, GridMode::periodic, 16.0, 128);
  const FieldGenerator g = [](const Grid& grid) { return gaussian(grid); };
  const DoublingStudy ok = doubling_study(g, base, 3, Scaling::domain, 0.25, 0.0, Prop21Part::part1);
  CHECK(ok.verdict == Verdict::convergent);
  // theta above n/2 with nonzero mean: the punctured sum grows like sqrt(L).
  std::vector<double> lhs;
  for (int k = 0; k < 3; ++k) {
    const Grid grid(1, GridMode::periodic, 16.0 * (1 << k), 128L << k);
    lhs.push_back(riesz_weighted_integral(forward_transform(gaussian(grid)), 0.75, ZeroMode::excluded));
  }
  CHECK(lhs[1] / lhs[0] - 1.0 >= 0.10);
  CHECK(lhs[2] / lhs[1] - 1.0 >= 0.10);
  CHECK(to_string(Verdict::divergent) == "divergent");
}
