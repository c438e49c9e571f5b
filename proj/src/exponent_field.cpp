#include "vex/exponent_field.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vex {

namespace {

std::string node_tag(const Grid& g, Eigen::Index k) {
  std::string s = "node " + std::to_string(k) + " (x = " + std::to_string(g.coord(k, 0));
  if (g.dim() == 2) s += ", y = " + std::to_string(g.coord(k, 1));
  return s + ")";
}

}  // namespace

ExponentField::ExponentField(Grid grid, Vec values)
    : grid_(std::move(grid)), values_(std::move(values)),
      inf_(Mask::Constant(values_.size(), false)) {
  validate();
}

ExponentField::ExponentField(Grid grid, Vec values, Mask inf_mask)
    : grid_(std::move(grid)), values_(std::move(values)), inf_(std::move(inf_mask)) {
  validate();
}

void ExponentField::validate() {
  if (values_.size() != grid_.size() || inf_.size() != grid_.size())
    throw domain_error("exponent field size does not match grid");
  for (Eigen::Index k = 0; k < values_.size(); ++k) {
    if (inf_[k]) {
      values_[k] = 1.0;  // placeholder under the flag
      continue;
    }
    if (!std::isfinite(values_[k]))
      throw domain_error("exponent field has a non-finite value at " +
                         node_tag(grid_, k) + "; use the infinity flag instead");
    if (values_[k] < 0.0)
      throw domain_error("exponent field is negative at " + node_tag(grid_, k));
  }
}

ExponentField ExponentField::constant(const Grid& g, double value) {
  return ExponentField(g, Vec::Constant(g.size(), value));
}

double ExponentField::finite_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < values_.size(); ++k)
    if (!inf_[k]) m = std::min(m, values_[k]);
  return m;
}

double ExponentField::finite_max() const {
  if (any_inf()) return std::numeric_limits<double>::infinity();
  return values_.maxCoeff();
}

ExponentField conjugate(const ExponentField& p) {
  const Grid& g = p.grid();
  Vec out(g.size());
  Mask inf(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (p.is_inf(k)) {
      out[k] = 1.0;
      inf[k] = false;
      continue;
    }
    double v = p.value(k);
    if (v < 1.0)
      throw domain_error("conjugate exponent undefined: p < 1 at " + node_tag(g, k));
    if (v == 1.0) {
      out[k] = 1.0;
      inf[k] = true;
    } else {
      out[k] = v / (v - 1.0);
      inf[k] = false;
    }
  }
  return ExponentField(g, std::move(out), std::move(inf));
}

CriticalExponents critical_exponents(double p0, int n) {
  if (p0 < 2.0)
    throw domain_error("critical exponents need p0 >= 2, got " + std::to_string(p0));
  double q0 = p0 / (p0 - 1.0);
  if (n <= q0)
    throw domain_error("critical exponent undefined for analysis dimension n = " +
                       std::to_string(n) + " (needs n > " + std::to_string(q0) + ")");
  return {q0, n * p0 / (n - q0)};
}

DerivedFields derived_fields(const ExponentField& p, double p1,
                             const ExponentField& xi) {
  const Grid& g = p.grid();
  if (xi.grid() != g) throw domain_error("derived fields: p and xi grids differ");
  if (p.any_inf() || xi.any_inf())
    throw domain_error("derived fields need finite p and xi");
  if (p1 < 2.0)
    throw domain_error("reference exponent p1 must be >= 2, got " + std::to_string(p1));

  Vec gamma(g.size()), theta(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double pv = p.value(k);
    double xv = xi.value(k);
    if (pv < p1)
      throw domain_error("p1 = " + std::to_string(p1) + " exceeds p at " + node_tag(g, k));
    if (xv <= 1.0)
      throw domain_error("growth exponent must exceed 1 at " + node_tag(g, k));
    gamma[k] = (pv - p1) / (p1 - 1.0);
    theta[k] = (xv + gamma[k]) / (gamma[k] + 1.0);
  }

  double q1 = p1 / (p1 - 1.0);
  int n = g.analysis_dim();
  if (n <= q1)
    throw domain_error("critical exponent undefined for analysis dimension n = " +
                       std::to_string(n) + " (needs n > " + std::to_string(q1) + ")");
  double ptilde1 = n * p1 / (n - q1);

  Vec pt = ptilde1 * (gamma + 1.0) - gamma;
  return {ExponentField(g, std::move(gamma)), ExponentField(g, std::move(theta)),
          ExponentField(g, std::move(pt)), q1, ptilde1};
}

const Mask& DomainPartition::region(int r) const {
  switch (r) {
    case 1: return region1;
    case 2: return region2;
    default: return region3;
  }
}

DomainPartition partition(const ExponentField& alpha, const ExponentField& p_ref,
                          double eta, const ExponentField& ptilde) {
  const Grid& g = alpha.grid();
  if (p_ref.grid() != g || ptilde.grid() != g)
    throw domain_error("partition: field grids differ");
  if (!(eta > 0.0 && eta < 1.0))
    throw domain_error("partition width eta must lie in (0, 1), got " +
                       std::to_string(eta));
  if (alpha.any_inf() || p_ref.any_inf() || ptilde.any_inf())
    throw domain_error("partition needs finite exponent fields");

  Mask r1 = Mask::Constant(g.size(), false);
  Mask r2 = r1, r3 = r1;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double a = alpha.value(k);
    double pr = p_ref.value(k);
    double pt = ptilde.value(k);
    if (a < 1.0)
      throw domain_error("growth exponent below 1 at " + node_tag(g, k));
    if (!(pt > pr))
      throw domain_error("partition needs ptilde > reference exponent at " +
                         node_tag(g, k));
    if (a < pr - eta) r1[k] = true;
    else if (a < pt) r2[k] = true;
    else r3[k] = true;
  }
  return {g, std::move(r1), std::move(r2), std::move(r3), eta};
}

namespace {

ExponentField masked_field(const Grid& g, const Mask& domain, const Vec& values) {
  Vec out = Vec::Constant(g.size(), 1.0);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (domain[k]) out[k] = values[k];
  return ExponentField(g, std::move(out));
}

}  // namespace

MuFields mu_fields(const DomainPartition& part, const ExponentField& theta,
                   const ExponentField& theta_star, const ExponentField& gamma,
                   const ExponentField& xi, const ExponentField* xi1, double p1,
                   double q1, double ptilde1) {
  const Grid& g = part.grid;
  if (theta.grid() != g || gamma.grid() != g || xi.grid() != g ||
      theta_star.grid() != g || (xi1 && xi1->grid() != g))
    throw domain_error("mu fields: grids differ");

  Eigen::Index size = g.size();
  Vec mu1 = Vec::Constant(size, 1.0), mu2 = mu1, mu3 = mu1;
  Mask dom12 = Mask::Constant(size, false);
  Vec mu4(size), mu(size);
  Mask mu_inf = Mask::Constant(size, false);

  for (Eigen::Index k = 0; k < size; ++k) {
    double gm = gamma.value(k);
    double p = p1 + gm * (p1 - 1.0);

    if (part.region2[k] && xi1) {
      double x1 = xi1->value(k);
      if (!(x1 < p))
        throw domain_error("region-2 sign exponent reaches p at " + node_tag(g, k));
      if (x1 < 1.0)
        throw domain_error("region-2 sign exponent below 1 at " + node_tag(g, k));
      mu1[k] = (p + gm) / (p - x1);
      mu2[k] = (x1 + gm) / x1;
      dom12[k] = true;
    }
    if (part.region3[k]) {
      double xv = xi.value(k);
      mu3[k] = (xv + gm) / xv;
    }

    bool ts_inf = theta_star.is_inf(k);
    double ts = theta_star.value(k);
    double th = theta.value(k);
    if (part.region1[k]) {
      mu4[k] = ts_inf ? 1.0 : ts;
      if (!ts_inf && !(p1 > th))
        throw domain_error("theta reaches p1 on region 1 at " + node_tag(g, k));
      mu[k] = ts_inf ? 1.0 : p1 * ts / (p1 - th);
      mu_inf[k] = ts_inf;
    } else if (part.region2[k]) {
      mu4[k] = q1;
      if (!ts_inf && !(ptilde1 > th))
        throw domain_error("theta reaches ptilde1 on region 2 at " + node_tag(g, k));
      mu[k] = ts_inf ? 1.0 : ptilde1 * ts / (ptilde1 - th);
      mu_inf[k] = ts_inf;
    } else {
      mu4[k] = q1;
      mu[k] = 1.0;
      mu_inf[k] = true;
    }
  }

  Mask mu4_inf = Mask::Constant(size, false);
  for (Eigen::Index k = 0; k < size; ++k)
    mu4_inf[k] = part.region1[k] && theta_star.is_inf(k);

  return {SubdomainExponent{masked_field(g, dom12, mu1), dom12},
          SubdomainExponent{masked_field(g, dom12, mu2), dom12},
          SubdomainExponent{masked_field(g, part.region3, mu3), part.region3},
          ExponentField(g, std::move(mu4), std::move(mu4_inf)),
          ExponentField(g, std::move(mu), std::move(mu_inf))};
}

BetaFields beta_fields(const DomainPartition& part, const ExponentField& alpha,
                       double p0, double q0, double ptilde) {
  const Grid& g = part.grid;
  if (alpha.grid() != g) throw domain_error("beta fields: grids differ");

  ExponentField astar = conjugate(alpha);
  Eigen::Index size = g.size();
  Vec beta(size), beta1(size);
  Mask beta_inf = Mask::Constant(size, false);
  Mask beta1_inf = Mask::Constant(size, false);

  for (Eigen::Index k = 0; k < size; ++k) {
    double a = alpha.value(k);
    bool as_inf = astar.is_inf(k);
    double as = astar.value(k);
    if (part.region1[k]) {
      beta1[k] = as_inf ? 1.0 : as;
      beta1_inf[k] = as_inf;
      beta[k] = as_inf ? 1.0 : p0 * as / (p0 - a);
      beta_inf[k] = as_inf;
    } else if (part.region2[k]) {
      beta1[k] = q0;
      beta[k] = as_inf ? 1.0 : ptilde * as / (ptilde - a);
      beta_inf[k] = as_inf;
    } else {
      beta1[k] = q0;
      beta[k] = 1.0;
      beta_inf[k] = true;
    }
  }
  return {ExponentField(g, std::move(beta), std::move(beta_inf)),
          ExponentField(g, std::move(beta1), std::move(beta1_inf))};
}

}  // namespace vex
