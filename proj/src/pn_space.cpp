#include "vex/pn_space.hpp"

#include <cmath>
#include <string>

#include "vex/expr.hpp"

namespace vex {

namespace {

void require_index(PnIndex idx) {
  if (idx.alpha < 0.0)
    throw domain_error("pn index: alpha must be >= 0, got " + std::to_string(idx.alpha));
  if (idx.beta < 1.0)
    throw domain_error("pn index: beta must be >= 1, got " + std::to_string(idx.beta));
}

// |u|^alpha |D u|^beta with the 0^0 = 1 convention for alpha = 0.
Vec weighted_integrand(const Vec& u, const Vec& du, PnIndex idx) {
  if (idx.alpha == 0.0) return du.abs().pow(idx.beta);
  return u.abs().pow(idx.alpha) * du.abs().pow(idx.beta);
}

}  // namespace

double pn_seminorm_power(const GridFunction& u, PnIndex idx) {
  require_index(idx);
  double acc = 0.0;
  for (int axis = 0; axis < u.grid().dim(); ++axis) {
    Vec du = gradient(u, axis);
    acc += integrate(u.grid(), weighted_integrand(u.values(), du, idx));
  }
  return acc;
}

double pn_seminorm_power(const GridFunction& u, PnIndex idx,
                         const QuadratureRule& rule) {
  require_index(idx);
  if (rule.grid != u.grid())
    throw domain_error("pn_seminorm_power: rule grid differs");
  double acc = 0.0;
  for (int axis = 0; axis < u.grid().dim(); ++axis) {
    Vec du = gradient(u, axis);
    Vec uq = rule.at_points(u.values());
    Vec dq = rule.at_points(du);
    acc += (rule.weights * weighted_integrand(uq, dq, idx)).sum();
  }
  return acc;
}

double pn_seminorm(const GridFunction& u, PnIndex idx) {
  return std::pow(pn_seminorm_power(u, idx), 1.0 / idx.order());
}

GridFunction pn_phi(const GridFunction& u, PnIndex idx) {
  require_index(idx);
  double q = idx.alpha / idx.beta + 1.0;
  Vec out(u.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = sgnpow(u.values()[k], q);
  return GridFunction(u.grid(), std::move(out), u.dirichlet_zero());
}

GridFunction pn_phi_inverse(const GridFunction& v, PnIndex idx) {
  require_index(idx);
  double q = idx.beta / idx.order();
  Vec out(v.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = sgnpow(v.values()[k], q);
  return GridFunction(v.grid(), std::move(out), v.dirichlet_zero());
}

double pn_metric(const GridFunction& u, const GridFunction& v, PnIndex idx) {
  if (u.grid() != v.grid()) throw domain_error("pn_metric: grids differ");
  GridFunction pu = pn_phi(u, idx);
  GridFunction pv = pn_phi(v, idx);
  GridFunction diff(u.grid(), pu.values() - pv.values(),
                    u.dirichlet_zero() && v.dirichlet_zero());
  ExponentField beta = ExponentField::constant(u.grid(), idx.beta);
  return sobolev_norm(diff, beta);
}

PnEmbeddingReport pn_embedding_report(PnIndex idx, int n, double r, double p,
                                      const PnIndex* into) {
  require_index(idx);
  if (n < 2) throw domain_error("pn embedding: analysis dimension must be >= 2");

  PnEmbeddingReport rep;
  rep.idx = idx;
  rep.n = n;
  rep.r = r;
  rep.p = p;
  if (n > idx.beta) {
    double s = n * idx.order() / (n - idx.beta);
    rep.sobolev_exponent = s;
    rep.continuous_into_Lr = s >= r;
    rep.compact_into_Lr = s > r;
  }
  rep.contains_w1p = p >= idx.order();
  if (into) {
    require_index(*into);
    bool holds = idx.beta >= into->beta &&
                 into->alpha / into->beta >= idx.alpha / idx.beta &&
                 into->order() <= idx.order();
    rep.inclusion = PnInclusion{*into, holds};
  }
  return rep;
}

}  // namespace vex
