#pragma once

#include <map>
#include <optional>
#include <string>

#include "vex/expr.hpp"
#include "vex/exponent_field.hpp"
#include "vex/grid.hpp"

namespace vex {

// Pointwise nonlinearity c(x, tau): a closed-form expression over the node
// coordinates, the solution argument 'u', and any nodal fields bound by
// name (exponent or coefficient fields referenced from the expression).
struct Nonlinearity {
  ExprPtr expr;
  std::map<std::string, Vec> bindings;

  double eval(const Grid& g, Eigen::Index node, double tau) const;
  // Derivative in tau by central differences; symbolic differentiation of
  // arbitrary expressions is deliberately out of scope.
  double dtau(const Grid& g, Eigen::Index node, double tau) const;
};

enum class ProblemKind {
  // Constant leading exponent:
  //   leading_factor * sum_i -D_i(|u|^{p0-2} D_i u) + c(x, u) = h.
  reduced,
  // Variable leading exponent:
  //   -Laplace(|u|^{p(x)-2} u) + c(x, u) = h,
  // handled through the reduction to the constant-exponent form.
  variable,
};

struct ManufacturedSolution {
  GridFunction u_star;
  // True: the source is the discrete operator applied to u_star (residuals
  // vanish by construction).  False: the source is given in closed form and
  // u_star is only the error reference.
  bool stencil_source;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::reduced;
  Grid grid;
  std::string name;

  // Leading exponent field; constant for the reduced kind.
  ExponentField p;
  // The constant exponent: p0 of the reduced operator, or the reference
  // exponent p1 of the variable problem.
  double p_const = 2.0;
  double leading_factor = 1.0;

  // Growth exponent of the nonlinearity (alpha or xi) and the optional
  // region-2 sign exponent (alpha1 or xi1).
  ExponentField growth;
  std::optional<ExponentField> sign_growth;

  Nonlinearity c;
  // Coefficient fields "c0".."c5" of the growth/sign conditions; absent keys
  // mean identically zero.
  std::map<std::string, Vec> coeff;
  // Declared positive lower bound of c4 on region 3.
  double floor = 0.0;

  double eta = 0.05;

  std::optional<GridFunction> source;
  std::optional<ManufacturedSolution> manufactured;
  // Reduced specs pin the partition of the problem they came from; the mask
  // sets are exactly preserved by the reduction.
  std::optional<DomainPartition> pinned_partition;

  ProblemSpec(Grid g, ExponentField p_field, ExponentField growth_field)
      : grid(std::move(g)), p(std::move(p_field)), growth(std::move(growth_field)) {}

  double p0() const { return p_const; }
  Vec coefficient(const std::string& key) const;
  bool coefficient_is_zero(const std::string& key) const;
};

// Derived exponents of the variable problem under its reference exponent.
DerivedFields problem_derived(const ProblemSpec& spec);

// The region partition the hypothesis checks run against: the pinned masks
// when present, otherwise the classification of the growth exponent against
// (p - eta, ptilde).
DomainPartition problem_partition(const ProblemSpec& spec);

}  // namespace vex
