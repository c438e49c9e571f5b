#pragma once

#include <optional>

#include "vex/grid.hpp"
#include "vex/modular.hpp"

namespace vex {

// Index pair of the weighted gradient space: alpha >= 0 weights the
// function, beta >= 1 the gradient.
struct PnIndex {
  double alpha;
  double beta;

  double order() const { return alpha + beta; }
};

// sum over axes of the integral of |u|^alpha |D_i u|^beta; this is the
// (alpha+beta)-th power of the seminorm.
double pn_seminorm_power(const GridFunction& u, PnIndex idx);
double pn_seminorm_power(const GridFunction& u, PnIndex idx,
                         const QuadratureRule& rule);

// pn_seminorm_power^{1/(alpha+beta)}.
double pn_seminorm(const GridFunction& u, PnIndex idx);

// The odd power map v = |u|^{alpha/beta} u carrying the weighted space onto
// W^{1,beta}, and its inverse u = |v|^{-alpha/(alpha+beta)} v.  Both fix 0
// and preserve the Dirichlet flag.
GridFunction pn_phi(const GridFunction& u, PnIndex idx);
GridFunction pn_phi_inverse(const GridFunction& v, PnIndex idx);

// Metric pulled back through the power map:
// d(u, v) = || pn_phi(u) - pn_phi(v) ||_{W^{1,beta}}.
double pn_metric(const GridFunction& u, const GridFunction& v, PnIndex idx);

struct PnInclusion {
  PnIndex target;
  bool holds;  // beta >= beta1, alpha1/beta1 >= alpha/beta, order1 <= order
};

struct PnEmbeddingReport {
  PnIndex idx;
  int n;
  // n(alpha+beta)/(n-beta); empty when n <= beta.
  std::optional<double> sobolev_exponent;
  double r = 0.0;
  bool continuous_into_Lr = false;  // sobolev exponent >= r
  bool compact_into_Lr = false;     // strict
  double p = 0.0;
  bool contains_w1p = false;        // p >= alpha + beta
  std::optional<PnInclusion> inclusion;
};

// Membership tests of the three embedding statements for the zero-trace
// space; `into` asks in addition whether the space includes into the space
// of the target index pair.
PnEmbeddingReport pn_embedding_report(PnIndex idx, int n, double r, double p,
                                      const PnIndex* into = nullptr);

}  // namespace vex
