#include "vex/transform.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vex {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (a != b) throw domain_error(std::string(op) + ": grids differ");
}

void require_rho(const ExponentField& rho, const char* op) {
  if (rho.any_inf()) throw domain_error(std::string(op) + ": rho must be finite");
  if (rho.finite_min() < 2.0)
    throw domain_error(std::string(op) + ": rho must be >= 2 everywhere");
}

void require_gamma(const ExponentField& gamma, const char* op) {
  if (gamma.any_inf()) throw domain_error(std::string(op) + ": gamma must be finite");
}

}  // namespace

GridFunction phi0(const GridFunction& u, const ExponentField& rho) {
  require_same_grid(u.grid(), rho.grid(), "phi0");
  require_rho(rho, "phi0");
  Vec out(u.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = sgnpow(u.values()[k], rho.value(k) - 1.0);
  return GridFunction(u.grid(), std::move(out), u.dirichlet_zero());
}

GridFunction phi0_inverse(const GridFunction& v, const ExponentField& rho) {
  require_same_grid(v.grid(), rho.grid(), "phi0_inverse");
  require_rho(rho, "phi0_inverse");
  Vec out(v.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = sgnpow(v.values()[k], 1.0 / (rho.value(k) - 1.0));
  return GridFunction(v.grid(), std::move(out), v.dirichlet_zero());
}

GridFunction phi1(const GridFunction& u, const ExponentField& gamma) {
  require_same_grid(u.grid(), gamma.grid(), "phi1");
  require_gamma(gamma, "phi1");
  Vec out(u.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = sgnpow(u.values()[k], gamma.value(k) + 1.0);
  return GridFunction(u.grid(), std::move(out), u.dirichlet_zero());
}

GridFunction phi1_inverse(const GridFunction& v, const ExponentField& gamma) {
  require_same_grid(v.grid(), gamma.grid(), "phi1_inverse");
  require_gamma(gamma, "phi1_inverse");
  Vec out(v.grid().size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = sgnpow(v.values()[k], 1.0 / (gamma.value(k) + 1.0));
  return GridFunction(v.grid(), std::move(out), v.dirichlet_zero());
}

TransformDerivativeTerms transform_derivative_terms(const GridFunction& u,
                                                    const ExponentField& rho) {
  require_same_grid(u.grid(), rho.grid(), "transform_derivative_terms");
  require_rho(rho, "transform_derivative_terms");
  const Grid& g = u.grid();

  Vec power(g.size());   // |u|^{rho-2}
  Vec logged(g.size());  // |u|^{rho-2} u ln|u|, zero at u = 0
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double uv = u.values()[k];
    double rv = rho.value(k);
    power[k] = uv == 0.0 ? (rv == 2.0 ? 1.0 : 0.0) : std::pow(std::abs(uv), rv - 2.0);
    logged[k] = uv == 0.0 ? 0.0 : sgnpow(uv, rv - 1.0) * std::log(std::abs(uv));
  }

  TransformDerivativeTerms out;
  for (int axis = 0; axis < g.dim(); ++axis) {
    Vec du = gradient(u, axis);
    Vec drho = gradient(g, rho.values(), axis, false);
    out.analytic.push_back((rho.values() - 1.0) * power * du);
    out.log_term.push_back(drho * logged);
  }
  return out;
}

LogMomentConstants log_inequality_constants(const ExponentField& zeta,
                                            double beta, double eps) {
  if (!(beta > 1.0))
    throw domain_error("log moment bound needs beta > 1, got " + std::to_string(beta));
  if (!(eps > 0.0))
    throw domain_error("log moment bound needs eps > 0, got " + std::to_string(eps));
  if (zeta.any_inf()) throw domain_error("log moment bound needs finite zeta");
  double zmin = zeta.finite_min();
  if (zmin < 1.0)
    throw domain_error("log moment bound needs zeta >= 1, inf is " +
                       std::to_string(zmin));
  constexpr double e = 2.71828182845904523536;
  return {std::pow(beta / (e * eps), beta),
          std::pow(beta / (e * zmin), beta) * zeta.grid().measure()};
}

ReduceResult reduce_problem(const ProblemSpec& spec, const DomainPartition& part) {
  if (spec.kind != ProblemKind::variable)
    throw domain_error("reduce_problem expects the variable-exponent kind");
  require_same_grid(part.grid, spec.grid, "reduce_problem");

  const Grid& g = spec.grid;
  double p1 = spec.p_const;
  DerivedFields d = problem_derived(spec);
  const Vec& gamma = d.gamma.values();
  const Vec& xi = spec.growth.values();

  ProblemSpec r(g, ExponentField::constant(g, p1), d.theta);
  r.kind = ProblemKind::reduced;
  r.name = spec.name.empty() ? "reduced" : spec.name + "-reduced";
  r.p_const = p1;
  r.leading_factor = spec.leading_factor * (p1 - 1.0);

  // Nonlinearity in the new unknown: compose with the inverse change of
  // unknown at expression level, binding gamma under a fresh name.
  std::string gname = "gamma";
  while (spec.c.bindings.count(gname)) gname += "_r";
  r.c.expr = spec.c.expr->substitute(
      "u", parse_expression("sgnpow(u, 1 / (1 + " + gname + "))"));
  r.c.bindings = spec.c.bindings;
  r.c.bindings[gname] = gamma;

  // Growth condition carries over with exponent theta and the same
  // coefficients.  The sign conditions pick up a |v|^{gamma/(gamma+1)}
  // low-order term; where it has a nonzero coefficient it is absorbed by a
  // Young split with explicit constants.
  Vec c2 = spec.coefficient("c2");
  Vec c3 = spec.coefficient("c3");
  Vec c4 = spec.coefficient("c4");
  Vec c5 = spec.coefficient("c5");
  bool absorbed_region3 = false;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (part.region2[k] && gamma[k] > 0.0 && c3[k] != 0.0) {
      if (!spec.sign_growth)
        throw domain_error(
            "reduce_problem: a region-2 sign exponent is required to absorb the "
            "nonzero offset coefficient");
      double x1 = spec.sign_growth->value(k);
      c2[k] += 1.0;
      c3[k] = std::pow(c3[k], (x1 + gamma[k]) / x1);
    }
    if (part.region3[k] && gamma[k] > 0.0 && c5[k] != 0.0) {
      if (!(spec.floor > 0.0))
        throw domain_error(
            "reduce_problem: a positive declared floor is required to absorb the "
            "region-3 offset coefficient");
      double eps = 0.5 * spec.floor;
      double rr = (xi[k] + gamma[k]) / xi[k];
      double rp = (xi[k] + gamma[k]) / gamma[k];
      c4[k] -= eps;
      c5[k] = std::pow(eps * rp, -rr / rp) / rr * std::pow(c5[k], rr);
      absorbed_region3 = true;
    }
  }
  r.coeff = spec.coeff;
  r.coeff["c2"] = std::move(c2);
  r.coeff["c3"] = std::move(c3);
  r.coeff["c4"] = std::move(c4);
  r.coeff["c5"] = std::move(c5);
  r.floor = absorbed_region3 ? 0.5 * spec.floor : spec.floor;

  if (spec.sign_growth) {
    Vec x1p = (spec.sign_growth->values() + gamma) / (gamma + 1.0);
    r.sign_growth = ExponentField(g, std::move(x1p));
  }

  r.source = spec.source;
  if (spec.manufactured)
    r.manufactured = ManufacturedSolution{
        phi1(spec.manufactured->u_star, d.gamma), spec.manufactured->stencil_source};
  r.pinned_partition = part;

  // Transformed partition thresholds: report the separation and pick a
  // replacement width only when one exists; the pinned masks stay
  // authoritative either way.
  double gap1 = std::numeric_limits<double>::infinity();
  double gap2 = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double gap = p1 - d.theta.value(k);
    if (part.region1[k]) gap1 = std::min(gap1, gap);
    else if (part.region2[k]) gap2 = std::max(gap2, std::max(0.0, gap));
  }
  double hi = std::min(gap1, 0.999);
  r.eta = gap2 < hi ? std::max(0.5 * (gap2 + hi), 1e-9) : spec.eta;

  return {std::move(r), std::move(d), gap1, gap2};
}

}  // namespace vex
