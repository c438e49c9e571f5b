#include "vex/grid.hpp"

#include <cmath>
#include <string>

namespace vex {

Grid::Grid(double lo, double hi, int nodes, int analysis_dim)
    : dim_(1), analysis_dim_(analysis_dim), lo_{lo, 0.0}, hi_{hi, 0.0},
      nodes_{nodes, 1} {
  validate();
}

Grid::Grid(std::array<double, 2> lo, std::array<double, 2> hi,
           std::array<int, 2> nodes, int analysis_dim)
    : dim_(2), analysis_dim_(analysis_dim), lo_(lo), hi_(hi), nodes_(nodes) {
  validate();
}

void Grid::validate() const {
  for (int a = 0; a < dim_; ++a) {
    if (!(hi_[a] > lo_[a]))
      throw domain_error("grid axis " + std::to_string(a) + " has empty extent");
    if (nodes_[a] < 3)
      throw domain_error("grid axis " + std::to_string(a) +
                         " needs at least 3 nodes, got " + std::to_string(nodes_[a]));
  }
  if (size() < 9) throw domain_error("grid needs at least 9 nodes in total");
  if (analysis_dim_ < 2)
    throw domain_error("analysis dimension must be at least 2, got " +
                       std::to_string(analysis_dim_));
}

double Grid::measure() const {
  double m = hi_[0] - lo_[0];
  if (dim_ == 2) m *= hi_[1] - lo_[1];
  return m;
}

bool Grid::on_boundary(Eigen::Index k) const {
  auto m = multi(k);
  if (m[0] == 0 || m[0] == nodes_[0] - 1) return true;
  return dim_ == 2 && (m[1] == 0 || m[1] == nodes_[1] - 1);
}

Mask Grid::interior_mask() const {
  Mask mask(size());
  for (Eigen::Index k = 0; k < size(); ++k) mask[k] = !on_boundary(k);
  return mask;
}

Vec Grid::coords(int axis) const {
  Vec c(size());
  for (Eigen::Index k = 0; k < size(); ++k) c[k] = coord(k, axis);
  return c;
}

bool Grid::operator==(const Grid& o) const {
  return dim_ == o.dim_ && analysis_dim_ == o.analysis_dim_ && lo_ == o.lo_ &&
         hi_ == o.hi_ && nodes_ == o.nodes_;
}

GridFunction::GridFunction(Grid grid, Vec values, bool dirichlet_zero)
    : grid_(std::move(grid)), values_(std::move(values)),
      dirichlet_zero_(dirichlet_zero) {
  if (values_.size() != grid_.size())
    throw domain_error("grid function has " + std::to_string(values_.size()) +
                       " values for a grid of " + std::to_string(grid_.size()) +
                       " nodes");
}

GridFunction GridFunction::constant(const Grid& g, double value, bool dirichlet_zero) {
  return GridFunction(g, Vec::Constant(g.size(), value), dirichlet_zero);
}

void GridFunction::set_dirichlet_zero(bool flag) { dirichlet_zero_ = flag; }

namespace {

// 1D line stencil applied along one axis of the tensor grid.
void derive_line(const double* u, double* du, int n, double h, bool dirichlet,
                 ptrdiff_t stride) {
  auto at = [&](int i) { return u[ptrdiff_t(i) * stride]; };
  for (int i = 1; i < n - 1; ++i)
    du[ptrdiff_t(i) * stride] = (at(i + 1) - at(i - 1)) / (2.0 * h);
  if (dirichlet) {
    // odd reflection about the zero boundary value
    du[0] = at(1) / h;
    du[ptrdiff_t(n - 1) * stride] = -at(n - 2) / h;
  } else {
    du[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    du[ptrdiff_t(n - 1) * stride] =
        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  }
}

}  // namespace

Vec gradient(const Grid& g, const Vec& values, int axis, bool dirichlet_zero) {
  if (values.size() != g.size())
    throw domain_error("gradient: value count does not match grid");
  if (axis < 0 || axis >= g.dim())
    throw domain_error("gradient: axis " + std::to_string(axis) +
                       " out of range for a " + std::to_string(g.dim()) + "D grid");
  Vec du(g.size());
  int nx = g.nodes(0);
  int ny = g.nodes(1);
  double h = g.spacing(axis);
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy)
      derive_line(values.data() + ptrdiff_t(iy) * nx, du.data() + ptrdiff_t(iy) * nx,
                  nx, h, dirichlet_zero, 1);
  } else {
    for (int ix = 0; ix < nx; ++ix)
      derive_line(values.data() + ix, du.data() + ix, ny, h, dirichlet_zero, nx);
  }
  return du;
}

Vec gradient(const GridFunction& u, int axis) {
  return gradient(u.grid(), u.values(), axis, u.dirichlet_zero());
}

namespace {

Vec line_weights(int n, double h) {
  Vec w = Vec::Constant(n, h);
  w[0] = w[n - 1] = 0.5 * h;
  return w;
}

}  // namespace

Vec trapezoid_weights(const Grid& g) {
  Vec wx = line_weights(g.nodes(0), g.spacing(0));
  if (g.dim() == 1) return wx;
  Vec wy = line_weights(g.nodes(1), g.spacing(1));
  Vec w(g.size());
  for (int iy = 0; iy < g.nodes(1); ++iy)
    for (int ix = 0; ix < g.nodes(0); ++ix) w[g.index(ix, iy)] = wx[ix] * wy[iy];
  return w;
}

QuadratureRule QuadratureRule::trapezoid(const Grid& g) {
  return {Kind::trapezoid, g, trapezoid_weights(g)};
}

QuadratureRule QuadratureRule::midpoint(const Grid& g) {
  Eigen::Index cells = g.nodes(0) - 1;
  double vol = g.spacing(0);
  if (g.dim() == 2) {
    cells *= g.nodes(1) - 1;
    vol *= g.spacing(1);
  }
  return {Kind::midpoint, g, Vec::Constant(cells, vol)};
}

Vec QuadratureRule::at_points(const Vec& nodal) const {
  if (nodal.size() != grid.size())
    throw domain_error("quadrature: value count does not match grid");
  if (kind == Kind::trapezoid) return nodal;
  int nx = grid.nodes(0);
  if (grid.dim() == 1) {
    Vec mid(nx - 1);
    for (int i = 0; i + 1 < nx; ++i) mid[i] = 0.5 * (nodal[i] + nodal[i + 1]);
    return mid;
  }
  int ny = grid.nodes(1);
  Vec mid(Eigen::Index(nx - 1) * (ny - 1));
  Eigen::Index c = 0;
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      mid[c++] = 0.25 * (nodal[grid.index(ix, iy)] + nodal[grid.index(ix + 1, iy)] +
                         nodal[grid.index(ix, iy + 1)] + nodal[grid.index(ix + 1, iy + 1)]);
  return mid;
}

double integrate(const Grid& g, const Vec& nodal) {
  if (nodal.size() != g.size())
    throw domain_error("integrate: value count does not match grid");
  return (trapezoid_weights(g) * nodal).sum();
}

double integrate(const Grid& g, const Vec& nodal, const Mask& sub) {
  if (nodal.size() != g.size() || sub.size() != g.size())
    throw domain_error("integrate: value count does not match grid");
  Vec w = trapezoid_weights(g);
  return sub.select(w * nodal, 0.0).sum();
}

}  // namespace vex
