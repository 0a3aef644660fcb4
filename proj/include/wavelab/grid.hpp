#pragma once

#include <string_view>

#include <Eigen/Core>

#include "wavelab/error.hpp"

namespace wavelab {

enum class GridMode { box_dirichlet, periodic, radial3d };

std::string_view to_string(GridMode mode);
GridMode grid_mode_from_string(std::string_view name);

/// Truncated computational domain.
///
/// box_dirichlet  N nodes per axis on [-L, L], spacing 2L/(N-1). Nodes on the
///                faces are Dirichlet nodes (held at zero by the integrator).
/// periodic       N nodes per axis on [-L, L), spacing 2L/N, wrapping.
/// radial3d       N nodes on [0, L], spacing L/(N-1). Fields store v = r u of a
///                radial function u on R^3; v vanishes at r = 0 and r = L.
///
/// Nodes are numbered with axis 0 fastest.
class Grid {
 public:
  Grid(int dimension, GridMode mode, double half_extent, Eigen::Index points_per_axis);

  int dimension() const { return dimension_; }
  GridMode mode() const { return mode_; }
  double half_extent() const { return half_extent_; }
  Eigen::Index points_per_axis() const { return points_; }
  double spacing() const { return spacing_; }

  /// Number of stored lattice axes (1 for radial3d).
  int rank() const { return mode_ == GridMode::radial3d ? 1 : dimension_; }
  Eigen::Index size() const { return size_; }
  Eigen::Index stride(int axis) const;
  Eigen::Index axis_index(Eigen::Index node, int axis) const { return (node / stride(axis)) % points_; }

  /// Coordinate of lattice index i along any axis (radius for radial3d).
  double axis_coordinate(Eigen::Index i) const;
  double coordinate(Eigen::Index node, int axis) const { return axis_coordinate(axis_index(node, axis)); }
  /// Physical point in R^n; radial nodes map to (r, 0, 0).
  Eigen::VectorXd point(Eigen::Index node) const;
  double radius(Eigen::Index node) const;
  Eigen::ArrayXd radii() const;

  /// 1-D quadrature weight of lattice index i (trapezoid on box and radial).
  double axis_weight(Eigen::Index i) const;
  /// Tensor-product quadrature weights per node, without the radial 4*pi.
  Eigen::ArrayXd weights() const;
  /// 4*pi for radial3d (integrals of v-expressions over R^3), 1 otherwise.
  double measure_factor() const;

  /// True for nodes held at zero by the Dirichlet closure.
  bool is_dirichlet_node(Eigen::Index node) const;

  bool operator==(const Grid&) const = default;

 private:
  int dimension_;
  GridMode mode_;
  double half_extent_;
  Eigen::Index points_;
  double spacing_;
  Eigen::Index size_;
};

}  // namespace wavelab
