#include "wavelab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/SpecialFunctions>

#include "wavelab/initial_data.hpp"

namespace wavelab {

namespace {

void require_periodic(const Grid& grid, const char* who) {
  if (grid.mode() != GridMode::periodic) throw InvalidArgument(std::string(who) + ": requires a periodic grid");
}

Eigen::Index signed_index(Eigen::Index i, Eigen::Index n) { return i < n / 2 ? i : i - n; }

}  // namespace

// ---------------------------------------------------------------------------
// Transform

double Spectrum::dxi() const { return std::numbers::pi / grid.half_extent(); }

Eigen::VectorXd Spectrum::frequency(Eigen::Index index) const {
  Eigen::VectorXd xi(grid.dimension());
  for (int d = 0; d < grid.dimension(); ++d)
    xi[d] = dxi() * static_cast<double>(signed_index(grid.axis_index(index, d), grid.points_per_axis()));
  return xi;
}

Eigen::ArrayXd Spectrum::frequency_sq() const {
  Eigen::ArrayXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = frequency(i).squaredNorm();
  return out;
}

double Spectrum::l2_sq() const { return values.abs2().sum() * std::pow(dxi(), grid.dimension()); }

Spectrum forward_transform(const ScalarField& f) {
  const Grid& grid = f.grid();
  require_periodic(grid, "forward_transform");
  const int n = grid.dimension();
  const Eigen::Index N = grid.points_per_axis();

  Eigen::ArrayXcd data = f.values().cast<std::complex<double>>();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(N), out(N);
  for (int axis = 0; axis < n; ++axis) {
    const Eigen::Index stride = grid.stride(axis);
    for (Eigen::Index start = 0; start < grid.size(); ++start) {
      if (grid.axis_index(start, axis) != 0) continue;
      for (Eigen::Index i = 0; i < N; ++i) line[i] = data[start + i * stride];
      fft.fwd(out, line);
      for (Eigen::Index i = 0; i < N; ++i) data[start + i * stride] = out[i];
    }
  }

  // x_i = -L + i h gives the phase e^{i pi j} = (-1)^j per axis.
  const double h = grid.spacing();
  const double scale = std::pow(h / std::sqrt(2.0 * std::numbers::pi), n);
  Spectrum s{grid, Eigen::ArrayXcd(grid.size())};
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    Eigen::Index parity = 0;
    for (int d = 0; d < n; ++d) parity += signed_index(grid.axis_index(k, d), N);
    s.values[k] = (parity % 2 == 0 ? scale : -scale) * data[k];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Lattice zeta

double lattice_zeta(int n, double s) {
  if (n < 1 || n > 3) throw InvalidArgument("lattice_zeta: dimension must be 1, 2 or 3");
  if (s == 0.0) return -1.0;
  if (!(s > 0.0 && s < n)) throw InvalidArgument("lattice_zeta: requires 0 <= s < n");

  // Theta-function splitting at t = 1:
  //   pi^{-s/2} Gamma(s/2) Z(s) = sum' G(s/2, pi|j|^2) + sum' G((n-s)/2, pi|j|^2) + 2/(s-n) - 2/s
  // with G(a, x) = Gamma(a, x) / x^a. Terms decay like e^{-pi |j|^2}.
  const int shell = 6;
  const double a = 0.5 * s;
  const double b = 0.5 * (n - s);
  const double ga = std::tgamma(a);
  const double gb = std::tgamma(b);
  double sum = 0.0;
  const int hi1 = shell, hi2 = n >= 2 ? shell : 0, hi3 = n >= 3 ? shell : 0;
  for (int i = -hi1; i <= hi1; ++i)
    for (int j = -hi2; j <= hi2; ++j)
      for (int k = -hi3; k <= hi3; ++k) {
        const int q = i * i + j * j + k * k;
        if (q == 0) continue;
        const double x = std::numbers::pi * q;
        sum += ga * Eigen::numext::igammac(a, x) / std::pow(x, a) + gb * Eigen::numext::igammac(b, x) / std::pow(x, b);
      }
  sum += 2.0 / (s - n) - 2.0 / s;
  return sum * std::pow(std::numbers::pi, a) / ga;
}

// ---------------------------------------------------------------------------
// Riesz integral and norms

double riesz_weighted_integral(const Spectrum& spectrum, double theta, ZeroMode zero) {
  if (!(theta >= 0.0)) throw InvalidArgument("riesz_weighted_integral: theta must be nonnegative");
  const int n = spectrum.grid.dimension();
  const double dxi = spectrum.dxi();
  const Eigen::ArrayXd q = spectrum.frequency_sq();
  double sum = 0.0;
  double zero_mode = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double p = std::norm(spectrum.values[i]);
    if (q[i] == 0.0) zero_mode = p;
    else sum += p * std::pow(q[i], -theta);
  }
  sum *= std::pow(dxi, n);
  if (zero == ZeroMode::corrected && theta < 0.5 * n && zero_mode > 0.0)
    sum -= zero_mode * std::pow(dxi, n - 2.0 * theta) * lattice_zeta(n, 2.0 * theta);
  return sum;
}

double weighted_l1_norm(const ScalarField& f, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("weighted_l1_norm: gamma must lie in [0, 1]");
  const Eigen::ArrayXd weight = (1.0 + f.grid().radii()).pow(gamma);
  return volume_abs_integral(f, weight);
}

ScalarField project_mean_zero(const ScalarField& f) {
  require_periodic(f.grid(), "project_mean_zero");
  return ScalarField(f.grid(), f.values() - f.values().mean());
}

// ---------------------------------------------------------------------------
// Inequality checks

SpectralSample make_spectral_sample(const ScalarField& f, double theta, double gamma, Prop21Part part,
                                    ZeroMode zero) {
  const Grid& grid = f.grid();
  require_periodic(grid, "make_spectral_sample");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("spectral sample: gamma must lie in [0, 1]");
  const double half_n = 0.5 * grid.dimension();
  if (part == Prop21Part::part1 && !(theta >= 0.0 && theta < half_n))
    throw InvalidArgument("spectral sample: part 1 requires theta in [0, n/2)");
  if (part == Prop21Part::part2 && !(theta >= 0.0 && theta < gamma + half_n))
    throw InvalidArgument("spectral sample: part 2 requires theta in [0, gamma + n/2)");

  const Spectrum spectrum = forward_transform(f);
  SpectralSample s;
  s.gamma = gamma;
  s.theta = theta;
  s.mean_integral = volume_integral(f);
  s.l1_gamma = weighted_l1_norm(f, gamma);
  s.l2_sq = volume_inner_product(f, f);
  s.lhs = riesz_weighted_integral(spectrum, theta, zero);
  s.rhs_part1 = s.l1_gamma * s.l1_gamma + s.mean_integral * s.mean_integral + s.l2_sq;
  s.rhs_part2 = s.l1_gamma * s.l1_gamma + s.l2_sq;
  s.plancherel_error = s.l2_sq > 0.0 ? std::abs(spectrum.l2_sq() - s.l2_sq) / s.l2_sq : spectrum.l2_sq();
  return s;
}

namespace {

Prop21Check finish_check(double lhs, double rhs) {
  if (rhs == 0.0) {
    if (lhs != 0.0) throw InvalidArgument("prop21 check: right side vanishes while the left side does not");
    return {0.0, 0.0, 0.0};
  }
  return {lhs, rhs, lhs / rhs};
}

void require_mean_zero(const ScalarField& f) {
  if (std::abs(volume_integral(f)) > 1e-10 * weighted_l1_norm(f, 0.0))
    throw InvalidArgument("check_part2: input is not mean-zero");
}

}  // namespace

Prop21Check check_part1(const ScalarField& f, double theta, double gamma) {
  const SpectralSample s = make_spectral_sample(f, theta, gamma, Prop21Part::part1);
  return finish_check(s.lhs, s.rhs_part1);
}

Prop21Check check_part2(const ScalarField& f, double theta, double gamma, bool bypass_mean_zero) {
  if (!bypass_mean_zero) require_mean_zero(f);
  const SpectralSample s = make_spectral_sample(f, theta, gamma, Prop21Part::part2);
  return finish_check(s.lhs, s.rhs_part2);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DoublingStudy doubling_study(const FieldGenerator& generator, const Grid& base, int levels, Scaling scaling,
                             double theta, double gamma, Prop21Part part, bool bypass_mean_zero) {
  require_periodic(base, "doubling_study");
  if (levels < 2) throw InvalidArgument("doubling_study: needs at least two levels");
  DoublingStudy study;
  double L = base.half_extent();
  Eigen::Index N = base.points_per_axis();
  for (int k = 0; k < levels; ++k) {
    const Grid grid(base.dimension(), GridMode::periodic, L, N);
    const ScalarField f = generator(grid);
    if (part == Prop21Part::part2 && !bypass_mean_zero) require_mean_zero(f);
    const SpectralSample s = make_spectral_sample(f, theta, gamma, part);
    const double rhs = part == Prop21Part::part1 ? s.rhs_part1 : s.rhs_part2;
    study.levels.push_back({L, N, finish_check(s.lhs, rhs), s.plancherel_error});
    if (scaling == Scaling::domain) L *= 2.0;
    N *= 2;
  }
  bool convergent = true, divergent = true;
  for (std::size_t k = 1; k < study.levels.size(); ++k) {
    const double prev = study.levels[k - 1].check.lhs;
    const double cur = study.levels[k].check.lhs;
    const double change = prev != 0.0 ? cur / prev - 1.0 : (cur == 0.0 ? 0.0 : INFINITY);
    study.relative_change.push_back(change);
    convergent = convergent && std::abs(change) <= 0.05;
    divergent = divergent && change >= 0.10;
  }
  study.verdict = convergent ? Verdict::convergent : divergent ? Verdict::divergent : Verdict::inconclusive;
  return study;
}

ConstantEstimate estimate_constant(const std::vector<ScalarField>& family, double theta, double gamma,
                                   Prop21Part part) {
  if (family.empty()) throw InvalidArgument("estimate_constant: empty family");
  ConstantEstimate est;
  for (const ScalarField& f : family) {
    const Prop21Check c = part == Prop21Part::part1 ? check_part1(f, theta, gamma) : check_part2(f, theta, gamma);
    est.ratios.push_back(c.ratio);
    est.C_emp = std::max(est.C_emp, c.ratio);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Families

std::vector<ScalarField> gaussian_family(const Grid& grid, int count, std::uint64_t seed) {
  require_periodic(grid, "gaussian_family");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Fixed reach so that domain doubling keeps the same members.
  const double reach = std::min(2.0, 0.2 * grid.half_extent());
  std::vector<ScalarField> out;
  for (int i = 0; i < count; ++i) {
    const double width = 1.0 + unit(rng);
    Eigen::VectorXd c(grid.dimension());
    for (int d = 0; d < grid.dimension(); ++d) c[d] = reach * (2.0 * unit(rng) - 1.0);
    const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng));
    out.push_back(make_gaussian(grid, amp, c, width));
  }
  return out;
}

std::vector<ScalarField> dipole_family(const Grid& grid, int count, std::uint64_t seed) {
  require_periodic(grid, "dipole_family");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField> out;
  for (int i = 0; i < count; ++i) {
    const double width = 1.0 + unit(rng);
    Eigen::VectorXd dir(grid.dimension());
    for (int d = 0; d < grid.dimension(); ++d) dir[d] = normal(rng);
    const Eigen::VectorXd offset = (0.5 + 1.5 * unit(rng)) * dir.normalized();
    const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng));
    ScalarField f = make_gaussian(grid, amp, offset, width);
    f -= make_gaussian(grid, amp, -offset, width);
    out.push_back(project_mean_zero(f));
  }
  return out;
}

ConstantEstimate default_prop21_constant(int dimension) {
  constexpr std::uint64_t seed = 20240601;
  constexpr int count = 12;
  switch (dimension) {
    case 3: {
      const Grid grid(3, GridMode::periodic, 10.0, 40);
      return estimate_constant(gaussian_family(grid, count, seed), 1.0, 0.0, Prop21Part::part1);
    }
    case 2: {
      const Grid grid(2, GridMode::periodic, 16.0, 64);
      return estimate_constant(dipole_family(grid, count, seed), 1.0, 1.0, Prop21Part::part2);
    }
    case 1: {
      const Grid grid(1, GridMode::periodic, 32.0, 128);
      return estimate_constant(dipole_family(grid, count, seed), 1.0, 1.0, Prop21Part::part2);
    }
    default: throw InvalidArgument("default_prop21_constant: dimension must be 1, 2 or 3");
  }
}

}  // namespace wavelab
