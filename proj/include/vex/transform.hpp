#pragma once

#include <vector>

#include "vex/problem.hpp"

namespace vex {

// v = |u|^{rho(x)-2} u, the substitution that turns the degenerate leading
// operator into a Laplacian; requires rho >= 2.  Inverse:
// u = sgnpow(v, 1/(rho-1)).  Both fix zero and keep the Dirichlet flag.
GridFunction phi0(const GridFunction& u, const ExponentField& rho);
GridFunction phi0_inverse(const GridFunction& v, const ExponentField& rho);

// v = |u|^{gamma(x)} u, the change of unknown of the reduction; gamma >= 0.
// Inverse: u = sgnpow(v, 1/(gamma+1)).
GridFunction phi1(const GridFunction& u, const ExponentField& gamma);
GridFunction phi1_inverse(const GridFunction& v, const ExponentField& gamma);

// Nodal summands of D_i(|u|^{rho(x)-2} u) per axis:
//   analytic[i] = (rho - 1) |u|^{rho-2} D_i u
//   log_term[i] = (D_i rho) |u|^{rho-2} u ln|u|      (0 at u = 0)
// Discrete gradients use the grid stencil; the sum approximates the
// discrete derivative of phi0(u) to second order.
struct TransformDerivativeTerms {
  std::vector<Vec> analytic;
  std::vector<Vec> log_term;
};
TransformDerivativeTerms transform_derivative_terms(const GridFunction& u,
                                                    const ExponentField& rho);

// Constants of the moment bound
//   integral |u|^{zeta(x)} |ln|u||^beta <= M1 integral |u|^{zeta(x)+eps} + M2:
//   M1 = (beta/(e eps))^beta,  M2 = (beta/(e zeta^-))^beta mes(Omega).
// Both are the sharp suprema of the pointwise comparisons.  Requires
// beta > 1, eps > 0, zeta^- >= 1.
struct LogMomentConstants {
  double M1;
  double M2;
};
LogMomentConstants log_inequality_constants(const ExponentField& zeta,
                                            double beta, double eps);

struct ReduceResult {
  ProblemSpec reduced;
  DerivedFields derived;
  // Separation of the transformed partition thresholds: min over region 1 of
  // (p1 - theta), and max over region 2 of its positive part.  A constant
  // replacement width exists only when the first exceeds the second; the
  // reduced spec pins the masks regardless, so the sets are preserved
  // either way.
  double gap_region1_min;
  double gap_region2_max;
};

// Rewrites the variable-exponent problem as a constant-exponent one in
// v = phi1(u): constant exponent p1, leading factor (p1 - 1), nonlinearity
// composed with the inverse change of unknown, growth exponent theta, and
// coefficient fields transformed so the growth/sign conditions carry over
// (surplus low-order terms are absorbed by Young splits with explicit
// constants).
ReduceResult reduce_problem(const ProblemSpec& spec, const DomainPartition& part);

}  // namespace vex
