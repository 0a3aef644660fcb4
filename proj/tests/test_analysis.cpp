#include <doctest.h>

#include <cmath>

#include "wavelab/analysis.hpp"

using namespace wavelab;

namespace {

const DampingCoefficient poly{DampingFamily::polynomial, 1.0, 1.0};

RunHistory radial_run(double amplitude, double T) {
  const Grid grid(3, GridMode::radial3d, 20.0, 801);
  const InitialData d =
      compute_norms(make_gaussian(grid, amplitude, {}, 1.0), make_gaussian(grid, 0.5 * amplitude, {}, 1.0), poly);
  const Damping damping{poly, std::nullopt};
  WaveState state = init_state(d, damping, 0.025);
  RunOptions opt;
  opt.T = T;
  opt.record_every = 4;
  return run_until(state, d, seed_constants(d.norms, 1.0, 0.5, 1.0), opt);
}

}  // namespace

TEST_CASE("quantity names") {
  CHECK(quantity_from_string(to_string(Quantity::energy)) == Quantity::energy);
  CHECK(quantity_from_string(to_string(Quantity::l2)) == Quantity::l2);
  CHECK_THROWS_AS(quantity_from_string("momentum"), InvalidArgument);
}

TEST_CASE("decay fit recovers an exact power law") {
  std::vector<double> t, v;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.5 * i);
    v.push_back(5.0 * std::pow(1.0 + t.back(), -2.0));
  }
  const DecayFit fit = fit_decay(t, v, 1.0, 10.0);
  CHECK(std::abs(fit.slope + 2.0) < 1e-12);
  CHECK(fit.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.samples == 19);
}

TEST_CASE("decay fit preconditions") {
  std::vector<double> t, v;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.5 * i);
    v.push_back(1.0 / (1.0 + t.back()));
  }
  CHECK_THROWS_AS(fit_decay(t, v, 0.5, 10.0), InvalidArgument);   // t_lo < 1
  CHECK_THROWS_AS(fit_decay(t, v, 5.0, 5.0), InvalidArgument);    // empty window
  CHECK_THROWS_AS(fit_decay(t, v, 1.0, 5.0), InvalidArgument);    // 9 samples
  std::vector<double> bad = v;
  bad[10] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, bad, 1.0, 10.0), InvalidArgument);
  CHECK_THROWS_AS(fit_decay(t, std::vector<double>(3, 1.0), 1.0, 10.0), InvalidArgument);
}

TEST_CASE("bound certificates") {
  SUBCASE("zero data passes with ratio 0") {
    const RunHistory h = radial_run(0.0, 2.0);
    for (Quantity q : {Quantity::energy, Quantity::l2}) {
      const BoundCertificate c = bound_certificate(h, q);
      CHECK(c.pass);
      CHECK(c.sup_ratio == 0.0);
    }
  }
  SUBCASE("a decaying run peaks early and is scale invariant") {
    const RunHistory a = radial_run(1.0, 8.0);
    const RunHistory b = radial_run(-2.0, 8.0);
    for (Quantity q : {Quantity::energy, Quantity::l2}) {
      const BoundCertificate ca = bound_certificate(a, q);
      const BoundCertificate cb = bound_certificate(b, q);
      CHECK(ca.pass);
      CHECK(ca.t_sup >= 1.0);
      CHECK(ca.t_sup <= 4.0);
      CHECK(ca.sup_ratio > 0.0);
      CHECK(cb.sup_ratio == doctest::Approx(ca.sup_ratio).epsilon(1e-10));
    }
  }
  SUBCASE("a vanishing constant with live data is an error") {
    RunHistory h = radial_run(1.0, 1.0);
    h.seeds.I2_sq = 0.0;
    CHECK_THROWS_AS(bound_certificate(h, Quantity::energy), InvalidArgument);
  }
}

TEST_CASE("sup stability") {
  BoundCertificate a, b;
  CHECK(sup_stable(a, b));
  a.sup_ratio = 1.0;
  b.sup_ratio = 1.15;
  CHECK(sup_stable(a, b));
  b.sup_ratio = 1.3;
  CHECK_FALSE(sup_stable(a, b));
  CHECK(sup_stable(a, b, 0.5));
}

TEST_CASE("uniformity") {
  CHECK(uniformity_check({1.0, 1.0, 1.0}).pass);
  CHECK(uniformity_check({1.0, 1.2, 1.25}).pass);
  CHECK_FALSE(uniformity_check({1.0, 2.0, 3.0}).pass);
  CHECK(uniformity_check({0.0, 0.0, 0.0}).pass);
  const UniformityReport r = uniformity_check({0.8, 0.9, 0.85});
  CHECK(r.max == 0.9);
  CHECK(r.min == 0.8);
  CHECK_THROWS_AS(uniformity_check({1.0, 1.0}), InvalidArgument);
}

TEST_CASE("cutoff convergence study") {
  const Grid grid(3, GridMode::radial3d, 6.0, 301);
  const DampingCoefficient expo{DampingFamily::exponential, 1.0, 0.0};
  auto scenario = [&](double amplitude) {
    const InitialData d =
        compute_norms(make_gaussian(grid, amplitude, {}, 0.7), make_gaussian(grid, 0.5 * amplitude, {}, 0.7), expo);
    return Scenario{d, expo, 0.02, 3.0, 5, seed_constants(d.norms, 1.0, 0.5, 1.0)};
  };
  SUBCASE("zero data") {
    const MConvergenceStudy s = m_convergence_study(scenario(0.0), {1.0, 2.0, 4.0});
    for (const MConvergenceRow& r : s.rows) {
      CHECK(r.sup_error == 0.0);
      CHECK(r.lemma21_sup == 0.0);
    }
  }
  SUBCASE("errors shrink with m and vanish once m covers the grid") {
    const MConvergenceStudy s = m_convergence_study(scenario(1.0), {1.0, 2.0, 4.0, 6.0}, 2);
    REQUIRE(s.rows.size() == 4);
    CHECK(s.nonincreasing);
    CHECK(s.rows[0].sup_error > s.rows[2].sup_error);
    CHECK(s.rows[3].sup_error == 0.0);
    CHECK(s.rows[3].lemma21_sup == doctest::Approx(s.lemma21_sup_reference).epsilon(1e-12));
    std::vector<double> sups;
    for (const MConvergenceRow& r : s.rows) sups.push_back(r.lemma21_sup);
    CHECK(uniformity_check(sups).pass);
  }
  SUBCASE("radii must increase") {
    CHECK_THROWS_AS(m_convergence_study(scenario(1.0), {2.0, 1.0}), InvalidArgument);
  }
}
