#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vex/pn_space.hpp"
#include "vex/problem.hpp"

namespace vex {

struct ConditionCheck {
  std::string condition_id;
  std::string paper_eq;  // wire-format condition tag
  bool pass = true;
  bool skipped = false;
  // Worst slack of the inequality over the samples (negative on failure);
  // zero for plain finiteness checks.
  double margin = 0.0;
  // Reported quantity where one exists (modulars, sup norms).
  double value = std::numeric_limits<double>::quiet_NaN();
  Eigen::Index witness_node = -1;
  double witness_tau = 0.0;
  std::string note;
};

struct HypothesisReport {
  std::vector<ConditionCheck> checks;
  bool pass = true;
  // "general", "region1-only" (regions 2 and 3 empty), or "no-region3".
  std::string regime = "general";
};

// Growth bound |c(x,tau)| <= c0(x)|tau|^{g(x)-1} + c1(x) sampled at random
// (node, tau) pairs, tau log-uniform in magnitude up to 1e6 plus the special
// values 0 and +-1.
ConditionCheck growth_check(const ProblemSpec& spec, int samples, uint64_t seed);

// Sign conditions: on region 2, c(x,tau) tau >= -c2(x)|tau|^{g1(x)} - c3(x);
// on region 3, c(x,tau) tau >= c4(x)|tau|^{g(x)} - c5(x).  Empty regions
// come back skipped.
std::vector<ConditionCheck> sign_checks(const ProblemSpec& spec,
                                        const DomainPartition& part, int samples,
                                        uint64_t seed);

// Modulars of the coefficient fields under the region-dependent integrability
// exponents, and the region-3 floor of c4.  Exponent-bound subchecks of
// coefficients that vanish identically are skipped as vacuous.
std::vector<ConditionCheck> coefficient_integrability(const ProblemSpec& spec,
                                                      const DomainPartition& part);

HypothesisReport check_hypotheses(const ProblemSpec& spec,
                                  const DomainPartition& part, int samples = 400,
                                  uint64_t seed = 0);

// Explicit-constant lower bound for the natural energy pairing
//   lhs = sum_i integral |u|^{p0-2} |D_i u|^2 + integral c(x, u) u.
// Young splits with weights eps1 (region-1 growth term), eps2 (region-2 sign
// term), eps3 (region-1 offset term) move every coefficient term into
// p0-th moments plus the constant `offset`; the asserted inequality is
// lhs >= energy - eps_term + floor_term - offset.  The final-form
// coefficient against the zero-trace seminorm is measured, not asserted.
struct CoercivityReport {
  double lhs = 0;
  double energy = 0;
  double eps_term = 0;
  double floor_term = 0;
  double offset = 0;
  double bound = 0;
  bool holds = false;
  double final_form_coefficient = 0;
};

CoercivityReport coercivity_report(const GridFunction& u, const ProblemSpec& spec,
                                   const DomainPartition& part, double eps1 = 0.1,
                                   double eps2 = 0.1, double eps3 = 0.1);

// Pairing bound |sum_i integral |u|^{p0-2} D_i u D_i v| <=
// [u]^{p0-1} * (sum_i integral |D_i v|^{p0})^{1/p0}, where [u] is the
// zero-trace seminorm of index ((p0-2) q0, q0); a discrete Holder identity,
// so it holds with roundoff slack only.
struct DualBound {
  double lhs = 0;
  double rhs = 0;           // with the full W^{1,p0} norm of v
  double rhs_seminorm = 0;  // gradient factor only; the exact Holder cap
  bool holds = false;
};

DualBound dual_bound_check(const GridFunction& u, const GridFunction& v, double p0);

// Forward application of the solver stencil: the compact-difference image
// factor * L_h(|u|^{p-2} u) + c(x, u) at interior nodes, zero on boundary
// rows, where factor folds the leading constant of the problem kind.
Vec discrete_operator_image(const ProblemSpec& spec, const GridFunction& u);

// Weak-form residual against the nodal hat basis:
//   r(t) = factor * sum_i integral D_i(|u|^{p-2} u) D_i t
//        + integral c(x,u) t - integral h t,
// with the gradient factor evaluated through the transformed variable (an
// exact rewriting of |u|^{p-2} D_i u up to the leading constant) and
// face-based differences, so the form is discretely adjoint to the solver
// stencil.  per_test is node-indexed; boundary entries are zero.
struct WeakResidualReport {
  Vec per_test;
  double max_abs = 0;
  double scale = 0;  // max|h| * mes
};

WeakResidualReport weak_residual(const GridFunction& u, const ProblemSpec& spec);
double weak_residual_single(const GridFunction& u, const ProblemSpec& spec,
                            const GridFunction& test);

// Norms and seminorms placing the candidate in the solution space of its
// problem, including the log-weighted gradient moment and its explicit
// bound for the variable-exponent kind.
struct MembershipEntry {
  std::string quantity;
  double value;
};

struct MembershipReport {
  std::vector<MembershipEntry> entries;
  bool log_moment_applicable = false;
  double log_moment_lhs = 0;
  double log_moment_bound = 0;
  bool log_moment_ok = true;
};

MembershipReport membership_report(const GridFunction& u, const ProblemSpec& spec);

}  // namespace vex
