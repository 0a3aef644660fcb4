#include "wavelab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wavelab {

std::string_view to_string(GridMode mode) {
  switch (mode) {
    case GridMode::box_dirichlet:
      return "box_dirichlet";
    case GridMode::periodic:
      return "periodic";
    case GridMode::radial3d:
      return "radial3d";
  }
  return "unknown";
}

GridMode grid_mode_from_string(std::string_view name) {
  if (name == "box_dirichlet" || name == "box") return GridMode::box_dirichlet;
  if (name == "periodic") return GridMode::periodic;
  if (name == "radial3d") return GridMode::radial3d;
  throw InvalidArgument("unknown grid mode '" + std::string(name) + "'");
}

Grid::Grid(int dimension, GridMode mode, double half_extent, Eigen::Index points_per_axis)
    : dimension_(dimension), mode_(mode), half_extent_(half_extent), points_(points_per_axis) {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("grid: dimension must be 1, 2 or 3");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw InvalidArgument("grid: half extent L must be positive");
  if (points_per_axis < 8) throw InvalidArgument("grid: need at least 8 points per axis");
  if (mode == GridMode::radial3d && dimension != 3)
    throw InvalidArgument("grid: radial3d requires dimension 3");

  switch (mode) {
    case GridMode::box_dirichlet:
      spacing_ = 2.0 * half_extent / static_cast<double>(points_ - 1);
      break;
    case GridMode::periodic:
      spacing_ = 2.0 * half_extent / static_cast<double>(points_);
      break;
    case GridMode::radial3d:
      spacing_ = half_extent / static_cast<double>(points_ - 1);
      break;
  }
  size_ = 1;
  for (int d = 0; d < rank(); ++d) size_ *= points_;
}

Eigen::Index Grid::stride(int axis) const {
  Eigen::Index s = 1;
  for (int d = 0; d < axis; ++d) s *= points_;
  return s;
}

double Grid::axis_coordinate(Eigen::Index i) const {
  if (mode_ == GridMode::radial3d) return static_cast<double>(i) * spacing_;
  return -half_extent_ + static_cast<double>(i) * spacing_;
}

Eigen::VectorXd Grid::point(Eigen::Index node) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension_);
  for (int d = 0; d < rank(); ++d) x[d] = coordinate(node, d);
  return x;
}

double Grid::radius(Eigen::Index node) const {
  double r2 = 0.0;
  for (int d = 0; d < rank(); ++d) {
    const double c = coordinate(node, d);
    r2 += c * c;
  }
  return std::sqrt(r2);
}

Eigen::ArrayXd Grid::radii() const {
  Eigen::ArrayXd r(size_);
  for (Eigen::Index i = 0; i < size_; ++i) r[i] = radius(i);
  return r;
}

double Grid::axis_weight(Eigen::Index i) const {
  if (mode_ != GridMode::periodic && (i == 0 || i == points_ - 1)) return 0.5 * spacing_;
  return spacing_;
}

Eigen::ArrayXd Grid::weights() const {
  Eigen::ArrayXd w = Eigen::ArrayXd::Ones(size_);
  for (Eigen::Index node = 0; node < size_; ++node)
    for (int d = 0; d < rank(); ++d) w[node] *= axis_weight(axis_index(node, d));
  return w;
}

double Grid::measure_factor() const {
  return mode_ == GridMode::radial3d ? 4.0 * std::numbers::pi : 1.0;
}

bool Grid::is_dirichlet_node(Eigen::Index node) const {
  if (mode_ == GridMode::periodic) return false;
  for (int d = 0; d < rank(); ++d) {
    const Eigen::Index i = axis_index(node, d);
    if (i == 0 || i == points_ - 1) return true;
  }
  return false;
}

}  // namespace wavelab
