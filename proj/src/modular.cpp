#include "vex/modular.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vex {

namespace {

void require_same_grid(const GridFunction& u, const ExponentField& p,
                       const char* op) {
  if (u.grid() != p.grid())
    throw domain_error(std::string(op) + ": function and exponent grids differ");
}

void require_ge_one(const ExponentField& p, const char* op) {
  for (Eigen::Index k = 0; k < p.grid().size(); ++k)
    if (!p.is_inf(k) && p.value(k) < 1.0)
      throw domain_error(std::string(op) + ": exponent below 1 at node " +
                         std::to_string(k));
}

double modular_trapezoid(const Vec& u, const ExponentField& p, const Vec& w,
                         const Mask* sub) {
  double acc = 0.0;
  double sup = 0.0;
  bool any_sup = false;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (sub && !(*sub)[k]) continue;
    double a = std::abs(u[k]);
    if (p.is_inf(k)) {
      sup = std::max(sup, a);
      any_sup = true;
    } else {
      acc += w[k] * std::pow(a, p.value(k));
    }
  }
  return any_sup ? acc + sup : acc;
}

}  // namespace

double modular(const GridFunction& u, const ExponentField& p) {
  require_same_grid(u, p, "modular");
  require_ge_one(p, "modular");
  Vec w = trapezoid_weights(u.grid());
  return modular_trapezoid(u.values(), p, w, nullptr);
}

double modular(const GridFunction& u, const ExponentField& p, const Mask& sub) {
  require_same_grid(u, p, "modular");
  require_ge_one(p, "modular");
  if (sub.size() != u.grid().size())
    throw domain_error("modular: mask size does not match grid");
  Vec w = trapezoid_weights(u.grid());
  return modular_trapezoid(u.values(), p, w, &sub);
}

double modular(const GridFunction& u, const ExponentField& p,
               const QuadratureRule& rule) {
  require_same_grid(u, p, "modular");
  require_ge_one(p, "modular");
  if (rule.grid != u.grid()) throw domain_error("modular: rule grid differs");
  if (rule.kind == QuadratureRule::Kind::trapezoid)
    return modular_trapezoid(u.values(), p, rule.weights, nullptr);
  if (p.any_inf())
    throw domain_error(
        "modular: midpoint rule does not support infinity-flagged exponents");
  Vec uq = rule.at_points(u.values());
  Vec pq = rule.at_points(p.values());
  double acc = 0.0;
  for (Eigen::Index c = 0; c < uq.size(); ++c)
    acc += rule.weights[c] * std::pow(std::abs(uq[c]), pq[c]);
  return acc;
}

double luxemburg_norm(const GridFunction& u, const ExponentField& p,
                      const LuxemburgOptions& opts) {
  require_same_grid(u, p, "luxemburg_norm");
  require_ge_one(p, "luxemburg_norm");
  if (p.any_inf())
    throw domain_error(
        "luxemburg_norm: infinity-flagged exponent nodes are unsupported for norms");

  double umax = u.max_abs();
  if (umax == 0.0) return 0.0;

  Vec w = trapezoid_weights(u.grid());
  auto sigma = [&](double lambda) {
    GridFunction scaled(u.grid(), u.values() / lambda, u.dirichlet_zero());
    return modular_trapezoid(scaled.values(), p, w, nullptr);
  };

  // Bracket by doubling/halving from max|u|: the modular is strictly
  // decreasing in lambda wherever it is nonzero.
  double lo = umax, hi = umax;
  double s = sigma(umax);
  int guard = 0;
  if (s >= 1.0) {
    while (sigma(hi) > 1.0) {
      hi *= 2.0;
      if (++guard > 2000)
        throw numerical_error("luxemburg_norm: bracket expansion failed, hi = " +
                              std::to_string(hi));
    }
  } else {
    while (sigma(lo) < 1.0) {
      lo *= 0.5;
      if (++guard > 2000)
        throw numerical_error("luxemburg_norm: bracket contraction failed, lo = " +
                              std::to_string(lo));
    }
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < opts.max_bisections; ++it) {
    mid = 0.5 * (lo + hi);
    double v = sigma(mid);
    if (std::abs(v - 1.0) <= opts.tolerance) return mid;
    (v > 1.0 ? lo : hi) = mid;
  }
  throw numerical_error(
      "luxemburg_norm: bisection did not meet tolerance; bracket [" +
      std::to_string(lo) + ", " + std::to_string(hi) + "], modular " +
      std::to_string(sigma(mid)));
}

double sobolev_norm(const GridFunction& u, const ExponentField& p,
                    const LuxemburgOptions& opts) {
  double total = luxemburg_norm(u, p, opts);
  for (int axis = 0; axis < u.grid().dim(); ++axis) {
    GridFunction du(u.grid(), gradient(u, axis));
    total += luxemburg_norm(du, p, opts);
  }
  return total;
}

double lp_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw domain_error("lp_norm: exponent below 1");
  return std::pow(integrate(u.grid(), u.values().abs().pow(p)), 1.0 / p);
}

double gradient_lp_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw domain_error("gradient_lp_norm: exponent below 1");
  double acc = 0.0;
  for (int axis = 0; axis < u.grid().dim(); ++axis) {
    Vec du = gradient(u, axis);
    acc += integrate(u.grid(), du.abs().pow(p));
  }
  return std::pow(acc, 1.0 / p);
}

InclusionCheck inclusion_check(const ExponentField& p1, const ExponentField& p2) {
  if (p1.grid() != p2.grid())
    throw domain_error("inclusion_check: exponent grids differ");
  for (Eigen::Index k = 0; k < p1.grid().size(); ++k) {
    if (p1.is_inf(k)) continue;           // p2 <= infinity always
    if (p2.is_inf(k) || p2.value(k) > p1.value(k)) return {false, k};
  }
  return {true, -1};
}

EmbeddingCheck embedding_check(const ExponentField& p, const ExponentField& q,
                               int m, int n) {
  if (p.grid() != q.grid())
    throw domain_error("embedding_check: exponent grids differ");
  if (m < 1) throw domain_error("embedding_check: order m must be >= 1");
  if (p.any_inf() || q.any_inf())
    throw domain_error("embedding_check: needs finite exponent fields");

  Eigen::Index size = p.grid().size();
  Vec margin(size);
  bool holds = true;
  for (Eigen::Index k = 0; k < size; ++k) {
    double pv = p.value(k);
    double qv = q.value(k);
    if (m * pv >= n) {
      margin[k] = -std::numeric_limits<double>::infinity();
      holds = false;
      continue;
    }
    margin[k] = n * pv / (n - m * pv) - qv;
    if (!(margin[k] > 0.0)) holds = false;
  }
  return {holds, std::move(margin)};
}

}  // namespace vex
