#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "wavelab/grid.hpp"

namespace wavelab {

/// Nodal real-valued samples on a Grid. Values are an Eigen column array so
/// they compose with Eigen expressions through values().
template <typename Scalar>
class BasicField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit BasicField(const Grid& grid) : grid_(grid), values_(Values::Zero(grid.size())) {}

  template <typename Derived>
  BasicField(const Grid& grid, const Eigen::DenseBase<Derived>& values) : grid_(grid), values_(values) {
    if (values_.size() != grid_.size()) throw InvalidArgument("field: value count does not match grid");
  }

  static BasicField zero(const Grid& grid) { return BasicField(grid); }
  static BasicField constant(const Grid& grid, Scalar c) {
    return BasicField(grid, Values::Constant(grid.size(), c));
  }

  /// Samples fn(point) at every node. For radial3d grids fn receives (r,0,0)
  /// and the stored value is v = r * fn.
  template <typename Fn>
  static BasicField from_function(const Grid& grid, Fn&& fn) {
    BasicField f(grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Eigen::VectorXd x = grid.point(i);
      const Scalar value = static_cast<Scalar>(fn(x));
      f.values_[i] = grid.mode() == GridMode::radial3d ? static_cast<Scalar>(grid.radius(i)) * value : value;
    }
    return f;
  }

  const Grid& grid() const { return grid_; }
  Values& values() { return values_; }
  const Values& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar& operator[](Eigen::Index i) { return values_[i]; }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }

  bool all_finite() const { return values_.isFinite().all(); }

  /// Zeroes the Dirichlet nodes (box faces, radial r = 0 and r = L).
  void apply_dirichlet() {
    if (grid_.mode() == GridMode::periodic) return;
    for (Eigen::Index i = 0; i < size(); ++i)
      if (grid_.is_dirichlet_node(i)) values_[i] = Scalar(0);
  }

  BasicField& operator+=(const BasicField& o) {
    require_same_grid(o);
    values_ += o.values_;
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    require_same_grid(o);
    values_ -= o.values_;
    return *this;
  }
  BasicField& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }
  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(Scalar c, BasicField a) { return a *= c; }

  void require_same_grid(const BasicField& o) const {
    if (!(grid_ == o.grid_)) throw InvalidArgument("field: grid mismatch");
  }

 private:
  Grid grid_;
  Values values_;
};

using ScalarField = BasicField<double>;

namespace detail {

template <typename Scalar>
void add_second_difference(const Grid& grid, const typename BasicField<Scalar>::Values& in,
                           typename BasicField<Scalar>::Values& out) {
  const Eigen::Index n = grid.points_per_axis();
  const bool periodic = grid.mode() == GridMode::periodic;
  const Scalar inv_h2 = Scalar(1) / (Scalar(grid.spacing()) * Scalar(grid.spacing()));
  for (int axis = 0; axis < grid.rank(); ++axis) {
    const Eigen::Index s = grid.stride(axis);
    for (Eigen::Index node = 0; node < grid.size(); ++node) {
      const Eigen::Index i = (node / s) % n;
      Scalar lo(0), hi(0);
      if (i > 0)
        lo = in[node - s];
      else if (periodic)
        lo = in[node + (n - 1) * s];
      if (i < n - 1)
        hi = in[node + s];
      else if (periodic)
        hi = in[node - (n - 1) * s];
      out[node] += (lo - Scalar(2) * in[node] + hi) * inv_h2;
    }
  }
}

}  // namespace detail

/// Centered second-order Laplacian. Box grids read exterior ghosts as zero;
/// periodic grids wrap. Radial grids are rejected (see spatial_operator).
template <typename Scalar>
BasicField<Scalar> laplacian(const BasicField<Scalar>& f) {
  if (f.grid().mode() == GridMode::radial3d)
    throw InvalidArgument("laplacian: not formed on radial3d grids");
  BasicField<Scalar> out(f.grid());
  detail::add_second_difference<Scalar>(f.grid(), f.values(), out.values());
  return out;
}

/// The operator the wave equation is advanced with: the Laplacian on box and
/// periodic grids, d^2/dr^2 on the radial v-lattice (zero ghosts).
template <typename Scalar>
BasicField<Scalar> spatial_operator(const BasicField<Scalar>& f) {
  BasicField<Scalar> out(f.grid());
  detail::add_second_difference<Scalar>(f.grid(), f.values(), out.values());
  return out;
}

/// Quadrature of f*g: nodal sums times h^n (trapezoid end weights on box and
/// radial lattices). On radial3d grids this is int_0^L f g dr without 4*pi.
template <typename Scalar>
Scalar inner_product(const BasicField<Scalar>& f, const BasicField<Scalar>& g) {
  f.require_same_grid(g);
  const Eigen::ArrayXd w = f.grid().weights();
  return (w.cast<Scalar>() * f.values() * g.values()).sum();
}

/// Forward-difference gradient pairing over lattice edges.
template <typename Scalar>
Scalar grad_inner(const BasicField<Scalar>& f, const BasicField<Scalar>& g) {
  f.require_same_grid(g);
  const Grid& grid = f.grid();
  const Eigen::Index n = grid.points_per_axis();
  const bool periodic = grid.mode() == GridMode::periodic;
  const Scalar h(grid.spacing());
  Scalar total(0);
  for (int axis = 0; axis < grid.rank(); ++axis) {
    const Eigen::Index s = grid.stride(axis);
    for (Eigen::Index node = 0; node < grid.size(); ++node) {
      const Eigen::Index i = (node / s) % n;
      Eigen::Index next;
      if (i < n - 1)
        next = node + s;
      else if (periodic)
        next = node - (n - 1) * s;
      else
        continue;
      Scalar transverse(1);
      for (int d = 0; d < grid.rank(); ++d)
        if (d != axis) transverse *= Scalar(grid.axis_weight(grid.axis_index(node, d)));
      const Scalar df = f[next] - f[node];
      const Scalar dg = g[next] - g[node];
      total += df * dg / h * transverse;
    }
  }
  return total;
}

/// Sum over forward differences of |grad f|^2 with the nodal measure.
/// Radial: int_0^L |dv/dr|^2 dr.
template <typename Scalar>
Scalar grad_norm_sq(const BasicField<Scalar>& f) {
  return grad_inner(f, f);
}

/// Max |u| over nodes within shell_width of the truncation boundary (radial
/// grids report the physical u = v/r). Periodic grids have no boundary: 0.
template <typename Scalar>
Scalar boundary_activity(const BasicField<Scalar>& f, double shell_width) {
  const Grid& grid = f.grid();
  const double L = grid.half_extent();
  Scalar peak(0);
  switch (grid.mode()) {
    case GridMode::periodic:
      return Scalar(0);
    case GridMode::radial3d:
      for (Eigen::Index i = 1; i < grid.size(); ++i) {
        const double r = grid.radius(i);
        if (r >= L - shell_width) peak = std::max<Scalar>(peak, std::abs(f[i]) / Scalar(r));
      }
      return peak;
    case GridMode::box_dirichlet:
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        double depth = L;
        for (int d = 0; d < grid.rank(); ++d) depth = std::min(depth, L - std::abs(grid.coordinate(i, d)));
        if (depth <= shell_width + 1e-12 * L) peak = std::max<Scalar>(peak, std::abs(f[i]));
      }
      return peak;
  }
  return peak;
}

/// Physical-measure helpers. On radial grids these integrate over R^3 using
/// u = v/r and dx = 4 pi r^2 dr; elsewhere they reduce to the plain quadrature.
template <typename Scalar>
Scalar volume_inner_product(const BasicField<Scalar>& f, const BasicField<Scalar>& g) {
  return Scalar(f.grid().measure_factor()) * inner_product(f, g);
}

template <typename Scalar>
Scalar volume_grad_inner(const BasicField<Scalar>& f, const BasicField<Scalar>& g) {
  return Scalar(f.grid().measure_factor()) * grad_inner(f, g);
}

/// int w(x) u(x) dx for a nodal weight array w (e.g. the damping).
template <typename Scalar, typename Derived>
Scalar volume_integral(const BasicField<Scalar>& f, const Eigen::ArrayBase<Derived>& weight) {
  const Grid& grid = f.grid();
  Eigen::ArrayXd w = grid.weights();
  if (grid.mode() == GridMode::radial3d) w *= grid.radii();
  return Scalar(grid.measure_factor()) * (w.cast<Scalar>() * weight.template cast<Scalar>() * f.values()).sum();
}

template <typename Scalar>
Scalar volume_integral(const BasicField<Scalar>& f) {
  return volume_integral(f, Eigen::ArrayXd::Ones(f.size()));
}

/// int w(x) |u(x)| dx.
template <typename Scalar, typename Derived>
Scalar volume_abs_integral(const BasicField<Scalar>& f, const Eigen::ArrayBase<Derived>& weight) {
  BasicField<Scalar> a(f.grid(), f.values().abs());
  return volume_integral(a, weight);
}

/// CSV snapshot: one coordinate column per stored axis (x0.. or r), then value.
template <typename Scalar>
void write_csv(std::ostream& os, const BasicField<Scalar>& f) {
  const Grid& grid = f.grid();
  const auto old_precision = os.precision(17);
  if (grid.mode() == GridMode::radial3d) {
    os << "r,value\n";
  } else {
    for (int d = 0; d < grid.rank(); ++d) os << "x" << d << ",";
    os << "value\n";
  }
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    for (int d = 0; d < grid.rank(); ++d) os << grid.coordinate(i, d) << ",";
    os << f[i] << "\n";
  }
  os.precision(old_precision);
}

}  // namespace wavelab
