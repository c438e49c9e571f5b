#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "vex/errors.hpp"

namespace vex {

using Vec = Eigen::ArrayXd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Uniform tensor grid on an axis-aligned box, 1D or 2D.  Nodes are ordered
// row-major with x fastest: k = iy * nodes(0) + ix.  analysis_dim is the
// space dimension n entering the exponent formulas; it is deliberately
// independent of the grid dimension, so 1D grids can be analysed against
// n >= 2.
class Grid {
public:
  Grid(double lo, double hi, int nodes, int analysis_dim);
  Grid(std::array<double, 2> lo, std::array<double, 2> hi,
       std::array<int, 2> nodes, int analysis_dim);

  int dim() const { return dim_; }
  int analysis_dim() const { return analysis_dim_; }
  int nodes(int axis) const { return nodes_[axis]; }
  Eigen::Index size() const { return Eigen::Index(nodes_[0]) * nodes_[1]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double spacing(int axis) const {
    return (hi_[axis] - lo_[axis]) / (nodes_[axis] - 1);
  }
  double measure() const;

  Eigen::Index index(int ix, int iy = 0) const {
    return Eigen::Index(iy) * nodes_[0] + ix;
  }
  std::array<int, 2> multi(Eigen::Index k) const {
    int nx = nodes_[0];
    return {int(k % nx), int(k / nx)};
  }
  double coord(Eigen::Index k, int axis) const {
    auto m = multi(k);
    return lo_[axis] + m[size_t(axis)] * spacing(axis);
  }
  bool on_boundary(Eigen::Index k) const;
  Mask interior_mask() const;

  // Nodal array of one coordinate, e.g. coords(0) is x at every node.
  Vec coords(int axis) const;

  bool operator==(const Grid& o) const;
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  void validate() const;

  int dim_;
  int analysis_dim_;
  std::array<double, 2> lo_, hi_;
  std::array<int, 2> nodes_;
};

// Nodal scalar function.  dirichlet_zero marks functions that vanish on the
// boundary; it selects the boundary stencil of the discrete gradient and is
// a precondition of the zero-trace seminorms.
class GridFunction {
public:
  GridFunction(Grid grid, Vec values, bool dirichlet_zero = false);
  static GridFunction constant(const Grid& g, double value,
                               bool dirichlet_zero = false);

  const Grid& grid() const { return grid_; }
  const Vec& values() const { return values_; }
  Vec& values() { return values_; }
  bool dirichlet_zero() const { return dirichlet_zero_; }
  void set_dirichlet_zero(bool flag);

  double max_abs() const { return values_.size() ? values_.abs().maxCoeff() : 0.0; }

private:
  Grid grid_;
  Vec values_;
  bool dirichlet_zero_;
};

// Nodal partial derivative along `axis`.  Interior nodes: central
// differences.  Boundary nodes: for Dirichlet functions the odd-reflection
// ghost (the function vanishes there, so ghost = -inner value, giving
// D u_0 = u_1 / h); otherwise the second-order one-sided formula.  Both
// choices keep integrated quantities O(h^2).
Vec gradient(const GridFunction& u, int axis);

// Same stencil applied to a raw nodal array.
Vec gradient(const Grid& g, const Vec& values, int axis, bool dirichlet_zero);

struct QuadratureRule {
  enum class Kind { trapezoid, midpoint };

  Kind kind;
  Grid grid;
  // Trapezoid: one weight per node.  Midpoint: one weight per cell; nodal
  // integrands are averaged onto cell centers.  Either way the weights are
  // positive and sum to the measure of the box.
  Vec weights;

  static QuadratureRule trapezoid(const Grid& g);
  static QuadratureRule midpoint(const Grid& g);

  Eigen::Index points() const { return weights.size(); }
  // Values of a nodal array at the rule's evaluation points.
  Vec at_points(const Vec& nodal) const;
  double integrate(const Vec& nodal) const {
    return (weights * at_points(nodal)).sum();
  }
};

// Trapezoid integral of a nodal array; the workhorse reduction.
double integrate(const Grid& g, const Vec& nodal);

// Trapezoid integral restricted to a node mask.
double integrate(const Grid& g, const Vec& nodal, const Mask& sub);

// Nodal trapezoid weights (cached construction, same as
// QuadratureRule::trapezoid(g).weights).
Vec trapezoid_weights(const Grid& g);

}  // namespace vex
