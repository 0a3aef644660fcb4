#include "wavelab/coefficients.hpp"

#include <cmath>

#include "wavelab/grid.hpp"

namespace wavelab {

std::string_view to_string(DampingFamily family) {
  switch (family) {
    case DampingFamily::constant:
      return "constant";
    case DampingFamily::polynomial:
      return "polynomial";
    case DampingFamily::exponential:
      return "exponential";
  }
  return "unknown";
}

DampingFamily damping_family_from_string(std::string_view name) {
  if (name == "constant") return DampingFamily::constant;
  if (name == "polynomial") return DampingFamily::polynomial;
  if (name == "exponential") return DampingFamily::exponential;
  throw InvalidArgument("unknown damping family '" + std::string(name) + "'");
}

void DampingCoefficient::validate() const {
  if (!(V0 > 0.0) || !std::isfinite(V0)) throw InvalidArgument("damping: V0 must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("damping: alpha must be nonnegative");
}

void CutoffDamping::validate() const {
  base.validate();
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("damping: cutoff_m must be positive");
}

double eval_damping_radial(const DampingCoefficient& coeff, double r) {
  switch (coeff.family) {
    case DampingFamily::constant:
      return coeff.V0;
    case DampingFamily::polynomial:
      return std::pow(1.0 + r * r, 0.5 * coeff.alpha);
    case DampingFamily::exponential:
      return std::exp(r);
  }
  return coeff.V0;
}

double eval_cutoff_radial(const CutoffDamping& cd, double r) {
  if (r <= cd.m) return eval_damping_radial(cd.base, r);
  if (r >= cd.m + 1.0) return cd.base.V0;
  const double ramp = cd.m + 1.0 - r;
  return cd.base.V0 + ramp * (eval_damping_radial(cd.base, r) - cd.base.V0);
}

double Damping::operator()(double r) const {
  if (cutoff_m) return eval_cutoff_radial(CutoffDamping{coefficient, *cutoff_m}, r);
  return eval_damping_radial(coefficient, r);
}

Eigen::ArrayXd sample_damping(const Damping& damping, const Grid& grid) {
  Eigen::ArrayXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = damping(grid.radius(i));
  return out;
}

Eigen::ArrayXd sample_damping(const DampingCoefficient& coeff, const Grid& grid) {
  return sample_damping(Damping{coeff, std::nullopt}, grid);
}

AssumptionReport verify_assumption_A(const DampingCoefficient& coeff, const Grid& grid) {
  coeff.validate();
  const Eigen::ArrayXd a = sample_damping(coeff, grid);
  AssumptionReport report;
  report.min_value = a.minCoeff(&report.argmin);
  const double floor = coeff.V0 * (1.0 - 1e-12);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] < floor) report.violating_nodes.push_back(i);
  report.pass = report.violating_nodes.empty();
  return report;
}

Eigen::MatrixXd cutoff_pointwise_convergence(const DampingCoefficient& coeff,
                                             const std::vector<double>& radii,
                                             const std::vector<double>& ms) {
  for (std::size_t j = 1; j < ms.size(); ++j)
    if (!(ms[j] > ms[j - 1])) throw InvalidArgument("cutoff radii must be increasing");
  Eigen::MatrixXd table(static_cast<Eigen::Index>(radii.size()), static_cast<Eigen::Index>(ms.size()));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double exact = eval_damping_radial(coeff, radii[i]);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const double approx = eval_cutoff_radial(CutoffDamping{coeff, ms[j]}, radii[i]);
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::abs(approx - exact);
    }
  }
  return table;
}

}  // namespace wavelab
