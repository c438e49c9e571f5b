#pragma once

#include "vex/exponent_field.hpp"
#include "vex/grid.hpp"

namespace vex {

// Modular of u under the variable exponent p:
//   integral of |u|^{p(x)} over the finite-exponent nodes
//   plus the max of |u| over the infinity-flagged nodes (when any exist).
// The trapezoid rule is the default; the midpoint rule is the cross-check
// and rejects infinity-flagged exponents.
double modular(const GridFunction& u, const ExponentField& p);
double modular(const GridFunction& u, const ExponentField& p,
               const QuadratureRule& rule);

// Modular restricted to a node mask (trapezoid weights).
double modular(const GridFunction& u, const ExponentField& p, const Mask& sub);

struct LuxemburgOptions {
  double tolerance = 1e-10;  // on |modular(u/lambda) - 1|
  int max_bisections = 200;
};

// Scale normalization: the least lambda with modular(u/lambda) <= 1,
// located by bracketing from max|u| and bisecting.  Requires p >= 1
// everywhere and no infinity-flagged nodes.  Zero for u == 0.
double luxemburg_norm(const GridFunction& u, const ExponentField& p,
                      const LuxemburgOptions& opts = {});

// First-order Sobolev norm: ||u|| + sum over axes of ||D_i u||, each factor
// a Luxemburg norm under p.
double sobolev_norm(const GridFunction& u, const ExponentField& p,
                    const LuxemburgOptions& opts = {});

// Classical constant-exponent norm (integral form), used as the
// constant-exponent reference and for the zero-trace gradient norm.
double lp_norm(const GridFunction& u, double p);
// (sum over axes of the p-th moment of D_i u)^{1/p}.
double gradient_lp_norm(const GridFunction& u, double p);

struct InclusionCheck {
  bool holds;
  Eigen::Index witness;  // first violating node, -1 when holds
};

// L^{p1} embeds in L^{p2} exactly when p2 <= p1 at every node.
InclusionCheck inclusion_check(const ExponentField& p1, const ExponentField& p2);

struct EmbeddingCheck {
  bool holds;    // both strict inequalities at every node
  Vec margin;    // n p/(n - m p) - q per node; -inf where m p >= n
};

// First-order scale: W^{m,p} embeds into L^q (continuously and compactly)
// when m p(x) < n and q(x) < n p(x)/(n - m p(x)) strictly at every node.
EmbeddingCheck embedding_check(const ExponentField& p, const ExponentField& q,
                               int m, int n);

}  // namespace vex
