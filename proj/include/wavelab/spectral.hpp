#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wavelab/fields.hpp"

namespace wavelab {

/// Unitary continuum-normalized transform on a periodic grid:
///   fhat(xi) = (2 pi)^{-n/2} int e^{-i x.xi} f(x) dx,
/// sampled at xi_j = pi j / L, j in [-N/2, N/2) per axis. Entries follow the
/// grid's node layout in FFT order (index i holds j = i for i < N/2, else i - N).
struct Spectrum {
  Grid grid;
  Eigen::ArrayXcd values;

  /// Lattice spacing pi / L of the dual grid.
  double dxi() const;
  /// Frequency vector of entry `index`.
  Eigen::VectorXd frequency(Eigen::Index index) const;
  /// |xi|^2 for every entry.
  Eigen::ArrayXd frequency_sq() const;
  /// Sum |fhat|^2 dxi^n; equals ||f||^2 exactly (Plancherel).
  double l2_sq() const;
};

Spectrum forward_transform(const ScalarField& f);

/// Epstein zeta of the integer lattice, Z_n(s) = sum_{j != 0} |j|^{-s},
/// analytically continued to 0 <= s < n, where Z_n(0) = -1.
double lattice_zeta(int n, double s);

enum class ZeroMode {
  corrected,  // punctured sum plus the singular-cell correction |fhat(0)|^2 dxi^{n-2 theta} (-Z_n(2 theta))
  excluded,   // punctured sum only
};

/// int |fhat|^2 / |xi|^{2 theta} dxi as a lattice sum with xi = 0 removed. For
/// 0 <= theta < n/2 the default adds the exact singular-cell correction, so the
/// sum is accurate even when fhat(0) != 0. For theta >= n/2 the integral may
/// diverge; no correction is applied and domain doubling decides.
double riesz_weighted_integral(const Spectrum& spectrum, double theta, ZeroMode zero = ZeroMode::corrected);

/// int (1 + |x|)^gamma |f| dx.
double weighted_l1_norm(const ScalarField& f, double gamma);

/// f minus its grid mean; the result integrates to zero.
ScalarField project_mean_zero(const ScalarField& f);

enum class Prop21Part { part1, part2 };

struct SpectralSample {
  double gamma = 0.0;
  double theta = 0.0;
  double mean_integral = 0.0;  // int f
  double l1_gamma = 0.0;       // ||f||_{1,gamma}
  double l2_sq = 0.0;          // ||f||^2
  double lhs = 0.0;            // riesz_weighted_integral(fhat, theta)
  double rhs_part1 = 0.0;      // ||f||_{1,gamma}^2 + |int f|^2 + ||f||^2
  double rhs_part2 = 0.0;      // ||f||_{1,gamma}^2 + ||f||^2
  double plancherel_error = 0.0;  // relative |sum |fhat|^2 - ||f||^2|
};

/// Computes every term of the inequality for f. Enforces theta in [0, n/2) for
/// part 1 and theta in [0, gamma + n/2) for part 2; gamma in [0, 1].
SpectralSample make_spectral_sample(const ScalarField& f, double theta, double gamma, Prop21Part part,
                                    ZeroMode zero = ZeroMode::corrected);

struct Prop21Check {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

Prop21Check check_part1(const ScalarField& f, double theta, double gamma);

/// Requires |int f| <= 1e-10 ||f||_1 unless `bypass_mean_zero` is set.
Prop21Check check_part2(const ScalarField& f, double theta, double gamma, bool bypass_mean_zero = false);

/// Builds a field on a given periodic grid; used by the doubling studies.
using FieldGenerator = std::function<ScalarField(const Grid&)>;

enum class Scaling {
  domain,      // L and N double together, h fixed: the frequency lattice refines near 0
  resolution,  // N doubles at fixed L: the frequency box grows
};

enum class Verdict { convergent, divergent, inconclusive };

std::string_view to_string(Verdict verdict);

struct DoublingLevel {
  double L = 0.0;
  Eigen::Index N = 0;
  Prop21Check check;
  double plancherel_error = 0.0;
};

struct DoublingStudy {
  std::vector<DoublingLevel> levels;
  std::vector<double> relative_change;  // lhs_{k+1} / lhs_k - 1
  Verdict verdict = Verdict::inconclusive;
};

/// Recomputes lhs/rhs on `levels` successively doubled grids. The verdict is
/// convergent when every |change| <= 5%, divergent when every change >= 10%,
/// inconclusive otherwise.
DoublingStudy doubling_study(const FieldGenerator& generator, const Grid& base, int levels, Scaling scaling,
                             double theta, double gamma, Prop21Part part, bool bypass_mean_zero = false);

struct ConstantEstimate {
  double C_emp = 0.0;
  std::vector<double> ratios;
};

/// Max ratio over the family. Throws on an empty family.
ConstantEstimate estimate_constant(const std::vector<ScalarField>& family, double theta, double gamma,
                                   Prop21Part part);

/// Seeded Gaussians with varied widths, centers and signs.
std::vector<ScalarField> gaussian_family(const Grid& grid, int count, std::uint64_t seed);

/// Seeded mean-zero dipoles g(x - d) - g(x + d) with varied widths, offsets and signs.
std::vector<ScalarField> dipole_family(const Grid& grid, int count, std::uint64_t seed);

/// Default Riesz-inequality constant for a run in dimension n: part 1 with gamma = 0
/// for n = 3 and part 2 with gamma = 1 on dipoles for n < 3; theta = 1.
ConstantEstimate default_prop21_constant(int dimension);

}  // namespace wavelab
