#pragma once

#include <array>
#include <optional>

#include "vex/grid.hpp"

namespace vex {

// Nodal variable exponent.  Infinite exponents are carried as a per-node
// flag, never as a large float; the float slot under a flagged node is a
// placeholder and must not be read.  Finite values must be >= 0; ops that
// need integrability exponents (modulars, norms, conjugation, partition)
// enforce >= 1 themselves.
class ExponentField {
public:
  ExponentField(Grid grid, Vec values);
  ExponentField(Grid grid, Vec values, Mask inf_mask);
  static ExponentField constant(const Grid& g, double value);

  const Grid& grid() const { return grid_; }
  const Vec& values() const { return values_; }
  const Mask& inf_mask() const { return inf_; }
  bool any_inf() const { return inf_.any(); }
  bool is_inf(Eigen::Index k) const { return inf_[k]; }
  double value(Eigen::Index k) const { return values_[k]; }

  // inf / sup over the grid; sup is unbounded when any node is flagged.
  double finite_min() const;
  double finite_max() const;
  bool has_finite_node() const { return !inf_.all(); }

private:
  void validate();

  Grid grid_;
  Vec values_;
  Mask inf_;
};

// Nodal Sobolev conjugate: p=1 -> infinity, infinity -> 1, otherwise
// p/(p-1).  Values below 1 are a domain error naming the node.
ExponentField conjugate(const ExponentField& p);

struct CriticalExponents {
  double q0;      // p0/(p0-1)
  double ptilde;  // n p0/(n - q0)
};
// Requires p0 >= 2 and n > q0; otherwise the critical exponent is undefined
// for this analysis dimension.
CriticalExponents critical_exponents(double p0, int n);

struct DerivedFields {
  ExponentField gamma;         // (p - p1)/(p1 - 1)
  ExponentField theta;         // (xi + gamma)/(gamma + 1)
  ExponentField ptilde_field;  // ptilde1 (gamma + 1) - gamma
  double q1;                   // p1/(p1 - 1)
  double ptilde1;              // n p1/(n - q1)
};
// Requires 2 <= p1 <= p nodally, xi > 1 nodally, n > q1.
DerivedFields derived_fields(const ExponentField& p, double p1,
                             const ExponentField& xi);

// Three-way classification of the growth exponent against the reference
// exponent: region 1 where alpha < p_ref - eta, region 2 where
// p_ref - eta <= alpha < ptilde, region 3 where alpha >= ptilde.  The
// half-open convention makes the regions a disjoint cover of all nodes.
struct DomainPartition {
  Grid grid;
  Mask region1, region2, region3;
  double eta;

  const Mask& region(int r) const;
  Eigen::Index count(int r) const { return region(r).count(); }
  bool empty(int r) const { return count(r) == 0; }
};

DomainPartition partition(const ExponentField& alpha, const ExponentField& p_ref,
                          double eta, const ExponentField& ptilde);

// Exponent defined only on a subdomain; values off the domain mask are
// placeholders (1.0) and must not enter any reduction.
struct SubdomainExponent {
  ExponentField field;
  Mask domain;
};

// Integrability exponents of the coefficient fields, region by region.
// mu1 = (p + gamma)/(p - xi1) and mu2 = (xi1 + gamma)/xi1 live on region 2,
// mu3 = (xi + gamma)/xi on region 3, mu4 is theta* on region 1 and q1
// elsewhere, mu is p1 theta*/(p1 - theta) on region 1,
// ptilde1 theta*/(ptilde1 - theta) on region 2 and infinite on region 3.
struct MuFields {
  SubdomainExponent mu1, mu2, mu3;
  ExponentField mu4, mu;
};

// xi1 may be null when the region-2 sign condition is vacuous; mu1/mu2 then
// come back with empty domains.
MuFields mu_fields(const DomainPartition& part, const ExponentField& theta,
                   const ExponentField& theta_star, const ExponentField& gamma,
                   const ExponentField& xi, const ExponentField* xi1, double p1,
                   double q1, double ptilde1);

// The constant-exponent specialization of the same piecewise rules: beta1 is
// alpha* on region 1 and q0 elsewhere; beta is p0 alpha*/(p0 - alpha) on
// region 1, ptilde alpha*/(ptilde - alpha) on region 2, infinite on region 3.
struct BetaFields {
  ExponentField beta, beta1;
};

BetaFields beta_fields(const DomainPartition& part, const ExponentField& alpha,
                       double p0, double q0, double ptilde);

}  // namespace vex
