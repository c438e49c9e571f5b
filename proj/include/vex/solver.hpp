#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vex/estimates.hpp"
#include "vex/problem.hpp"
#include "vex/transform.hpp"

namespace vex {

struct SolverConfig {
  double tolerance = 1e-10;  // max-norm of the discrete nonlinear system
  int max_steps = 100;
  double min_damping = 1.0 / (1 << 20);
  // Clamp for the pointwise inverse-map derivative near w = 0; keeps the
  // Newton diagonal finite where the substitution is only semismooth.
  double delta_reg = 1e-12;
  bool fixed_point_fallback = true;
  int fixed_point_max_steps = 500;
  double relaxation = 0.5;
};

struct IterationRecord {
  int step;
  double residual;
  double damping;  // accepted backtracking fraction; 0 marks a rejected step
};

struct SolveReport {
  std::string status = "not-converged";  // or "solved"
  bool used_fallback = false;
  int iterations = 0;
  double final_residual = 0.0;
  WeakResidualReport weak;
  MembershipReport memberships;
  std::vector<IterationRecord> trace;
  GridFunction u;
  GridFunction w;  // transformed unknown |u|^{p-2} u
  std::optional<GridFunction> v;  // intermediate unknown of the variable kind

  SolveReport(GridFunction u_, GridFunction w_)
      : u(std::move(u_)), w(std::move(w_)) {}
  bool solved() const { return status == "solved"; }
};

// Damped Newton on the substituted system
//   factor/(p0-1) * L_h w + c(x, sgnpow(w, 1/(p0-1))) = h,  w = 0 on the
// boundary, with a linear first guess (c frozen at zero) and an optional
// under-relaxed fixed-point fallback.
SolveReport solve_reduced(const ProblemSpec& spec, const SolverConfig& cfg = {});

// Variable-exponent problem: reduce to the constant-exponent form, solve,
// and map back u = phi1_inverse(v).  Residuals and memberships are
// reported for the original problem; the reduced ones ride along prefixed.
SolveReport solve_main(const ProblemSpec& spec, const SolverConfig& cfg = {});

// Source realizing a chosen exact discrete solution: the operator image of
// u_star (boundary rows zero), so the solver must reproduce u_star to
// within its tolerance.
GridFunction manufactured_source(const ProblemSpec& spec,
                                 const GridFunction& u_star);

struct StudyRow {
  int nodes;  // per axis
  double h;   // largest spacing
  int iterations;
  double err_u;    // max-norm error against u_star
  double err_w;    // same for the transformed unknown
  double order_u;  // observed rate against the previous row; 0 on row one
  double order_w;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  bool monotone_w = true;
};

// Solves the manufactured problem on each node count and tabulates errors
// and observed convergence rates.
StudyReport refinement_study(const std::function<ProblemSpec(int)>& make,
                             const std::vector<int>& node_counts,
                             const SolverConfig& cfg = {});

}  // namespace vex
