#include "vex/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "vex/modular.hpp"
#include "vex/transform.hpp"

namespace vex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string node_label(const Grid& g, Eigen::Index k) {
  std::ostringstream os;
  os << "node " << k << " (x = " << g.coord(k, 0);
  if (g.dim() == 2) os << ", y = " << g.coord(k, 1);
  os << ")";
  return os.str();
}

std::vector<Eigen::Index> mask_nodes(const Mask& m) {
  std::vector<Eigen::Index> out;
  out.reserve(size_t(m.count()));
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (m[k]) out.push_back(k);
  return out;
}

double rel_scale(double a, double b) {
  return std::max({1.0, std::abs(a), std::abs(b)});
}

// Log-uniform magnitude in [1e-6, 1e6] with random sign; the first few
// samples hit the special points 0 and +-1 and +-10 deterministically.
double sample_tau(int s, std::mt19937_64& rng) {
  static const double specials[5] = {0.0, 1.0, -1.0, 10.0, -10.0};
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (s < 5) return specials[s];
  double tau = std::pow(10.0, expo(rng));
  return coin(rng) < 0.5 ? -tau : tau;
}

const Vec& require_source(const ProblemSpec& spec) {
  if (!spec.source) throw domain_error("problem has no source term");
  if (spec.source->grid() != spec.grid)
    throw domain_error("source term lives on a different grid");
  return spec.source->values();
}

double max_on(const Vec& v, const Mask& m) {
  double out = -kInf;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (m[k]) out = std::max(out, v[k]);
  return out;
}

double min_on(const Vec& v, const Mask& m) {
  double out = kInf;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (m[k]) out = std::min(out, v[k]);
  return out;
}

}  // namespace

ConditionCheck growth_check(const ProblemSpec& spec, int samples, uint64_t seed) {
  if (samples < 1) throw config_error("growth check needs at least one sample");
  if (spec.growth.any_inf())
    throw domain_error("growth exponent must be finite");
  const Grid& g = spec.grid;

  ConditionCheck out;
  out.condition_id = "growth";
  out.paper_eq = spec.kind == ProblemKind::reduced ? "3.1" : "4.1";

  Vec c0 = spec.coefficient("c0");
  Vec c1 = spec.coefficient("c1");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<Eigen::Index> node(0, g.size() - 1);

  double worst = kInf;
  double worst_rel = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::Index k = node(rng);
    double tau = sample_tau(s, rng);
    double lhs = std::abs(spec.c.eval(g, k, tau));
    double gk = spec.growth.value(k);
    double rhs = c0[k] * std::pow(std::abs(tau), gk - 1.0) + c1[k];
    double slack = rhs - lhs;
    if (slack < worst) {
      worst = slack;
      out.witness_node = k;
      out.witness_tau = tau;
    }
    worst_rel = std::max(worst_rel, (lhs - rhs) / rel_scale(lhs, rhs));
  }
  out.margin = worst;
  out.pass = worst_rel <= 1e-12;
  if (!out.pass) out.note = "growth bound violated";
  return out;
}

std::vector<ConditionCheck> sign_checks(const ProblemSpec& spec,
                                        const DomainPartition& part, int samples,
                                        uint64_t seed) {
  if (samples < 1) throw config_error("sign checks need at least one sample");
  if (part.grid != spec.grid) throw domain_error("partition grid mismatch");
  const Grid& g = spec.grid;
  bool reduced = spec.kind == ProblemKind::reduced;

  std::vector<ConditionCheck> out;

  // Region 2: c(x, tau) tau >= -c2 |tau|^{g1} - c3.
  {
    ConditionCheck ck;
    ck.condition_id = "sign-region2";
    ck.paper_eq = reduced ? "3.2" : "4.2";
    auto nodes = mask_nodes(part.region2);
    if (nodes.empty()) {
      ck.skipped = true;
      ck.note = "region 2 is empty";
    } else {
      Vec c2 = spec.coefficient("c2");
      Vec c3 = spec.coefficient("c3");
      double c2max = max_on(c2.abs(), part.region2);
      if (c2max > 0.0 && !spec.sign_growth) {
        ck.pass = false;
        ck.note = "nonzero region-2 coefficient without a sign exponent";
      } else {
        std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
        std::uniform_int_distribution<size_t> pick(0, nodes.size() - 1);
        double worst = kInf;
        double worst_rel = 0.0;
        for (int s = 0; s < samples; ++s) {
          Eigen::Index k = nodes[pick(rng)];
          double tau = sample_tau(s, rng);
          double lhs = spec.c.eval(g, k, tau) * tau;
          double lower = -c3[k];
          if (c2max > 0.0)
            lower -= c2[k] * std::pow(std::abs(tau), spec.sign_growth->value(k));
          double slack = lhs - lower;
          if (slack < worst) {
            worst = slack;
            ck.witness_node = k;
            ck.witness_tau = tau;
          }
          worst_rel = std::max(worst_rel, (lower - lhs) / rel_scale(lhs, lower));
        }
        ck.margin = worst;
        ck.pass = worst_rel <= 1e-12;
        if (!ck.pass) ck.note = "region-2 lower bound violated";
        if (c2max == 0.0 && !spec.sign_growth)
          ck.note = "sign exponent not declared; coefficient vanishes, bound "
                    "checked without the power term";
      }
    }
    out.push_back(std::move(ck));
  }

  // Region 3: c(x, tau) tau >= c4 |tau|^{g} - c5.
  {
    ConditionCheck ck;
    ck.condition_id = "sign-region3";
    ck.paper_eq = reduced ? "3.3" : "4.3";
    auto nodes = mask_nodes(part.region3);
    if (nodes.empty()) {
      ck.skipped = true;
      ck.note = "region 3 is empty";
    } else {
      Vec c4 = spec.coefficient("c4");
      Vec c5 = spec.coefficient("c5");
      std::mt19937_64 rng(seed ^ 0x165667b19e3779f9ull);
      std::uniform_int_distribution<size_t> pick(0, nodes.size() - 1);
      double worst = kInf;
      double worst_rel = 0.0;
      for (int s = 0; s < samples; ++s) {
        Eigen::Index k = nodes[pick(rng)];
        double tau = sample_tau(s, rng);
        double lhs = spec.c.eval(g, k, tau) * tau;
        double lower =
            c4[k] * std::pow(std::abs(tau), spec.growth.value(k)) - c5[k];
        double slack = lhs - lower;
        if (slack < worst) {
          worst = slack;
          ck.witness_node = k;
          ck.witness_tau = tau;
        }
        worst_rel = std::max(worst_rel, (lower - lhs) / rel_scale(lhs, lower));
      }
      ck.margin = worst;
      ck.pass = worst_rel <= 1e-12;
      if (!ck.pass) ck.note = "region-3 lower bound violated";
    }
    out.push_back(std::move(ck));
  }

  return out;
}

namespace {

ConditionCheck modular_entry(const std::string& id, const std::string& eq,
                             const Grid& g, const Vec& coeff,
                             const ExponentField& expo, const Mask* sub) {
  ConditionCheck ck;
  ck.condition_id = id;
  ck.paper_eq = eq;
  GridFunction f(g, coeff.abs());
  ck.value = sub ? modular(f, expo, *sub) : modular(f, expo);
  ck.pass = std::isfinite(ck.value);
  if (!ck.pass) ck.note = "modular is not finite";
  return ck;
}

ConditionCheck l1_entry(const std::string& id, const std::string& eq,
                        const Grid& g, const Vec& coeff, const Mask& sub) {
  ConditionCheck ck;
  ck.condition_id = id;
  ck.paper_eq = eq;
  ck.value = integrate(g, coeff.abs(), sub);
  ck.pass = std::isfinite(ck.value);
  if (!ck.pass) ck.note = "integral is not finite";
  return ck;
}

ConditionCheck skipped_entry(const std::string& id, const std::string& eq,
                             const std::string& why) {
  ConditionCheck ck;
  ck.condition_id = id;
  ck.paper_eq = eq;
  ck.skipped = true;
  ck.note = why;
  return ck;
}

ConditionCheck floor_entry(const std::string& id, const std::string& eq,
                           const Grid& g, const Vec& c4, const Mask& r3,
                           double floor) {
  ConditionCheck ck;
  ck.condition_id = id;
  ck.paper_eq = eq;
  ck.value = max_on(c4, r3);
  ck.margin = min_on(c4, r3) - floor;
  ck.pass = std::isfinite(ck.value) && floor > 0.0 && ck.margin >= 0.0;
  if (floor <= 0.0)
    ck.note = "declared floor must be positive on region 3";
  else if (ck.margin < 0.0)
    ck.note = "coefficient drops below the declared floor";
  (void)g;
  return ck;
}

}  // namespace

std::vector<ConditionCheck> coefficient_integrability(const ProblemSpec& spec,
                                                      const DomainPartition& part) {
  if (part.grid != spec.grid) throw domain_error("partition grid mismatch");
  const Grid& g = spec.grid;
  int n = g.analysis_dim();
  bool reduced = spec.kind == ProblemKind::reduced;
  const char* eq = reduced ? "thm-3.2" : "thm-4.6";
  auto key = [&](int i) {
    return std::string("integrability-") + (reduced ? "c" : "a") + std::to_string(i);
  };

  std::vector<ConditionCheck> out;
  bool r2 = !part.empty(2);
  bool r3 = !part.empty(3);

  if (reduced) {
    double p0 = spec.p_const;
    auto crit = critical_exponents(p0, n);
    auto bf = beta_fields(part, spec.growth, p0, crit.q0, crit.ptilde);

    out.push_back(modular_entry(key(0), eq, g, spec.coefficient("c0"), bf.beta, nullptr));
    out.push_back(modular_entry(key(1), eq, g, spec.coefficient("c1"), bf.beta1, nullptr));

    if (!r2) {
      out.push_back(skipped_entry(key(2), eq, "region 2 is empty"));
      out.push_back(skipped_entry(key(3), eq, "region 2 is empty"));
    } else {
      Vec c2 = spec.coefficient("c2");
      if (max_on(c2.abs(), part.region2) == 0.0 && !spec.sign_growth) {
        out.push_back(skipped_entry(key(2), eq, "coefficient vanishes on region 2"));
      } else if (!spec.sign_growth) {
        ConditionCheck ck;
        ck.condition_id = key(2);
        ck.paper_eq = eq;
        ck.pass = false;
        ck.note = "nonzero region-2 coefficient without a sign exponent";
        out.push_back(std::move(ck));
      } else {
        // Exponent p0/(p0 - a1(x)) on region 2 requires a1 < p0 there.
        const Vec& a1 = spec.sign_growth->values();
        Vec expo = Vec::Constant(g.size(), 1.0);
        ConditionCheck bad;
        bool ok = true;
        for (Eigen::Index k = 0; k < g.size() && ok; ++k) {
          if (!part.region2[k]) continue;
          if (!(a1[k] < p0)) {
            bad.condition_id = key(2);
            bad.paper_eq = eq;
            bad.pass = false;
            bad.witness_node = k;
            bad.note = "sign exponent reaches the leading exponent at " + node_label(g, k);
            ok = false;
          } else {
            expo[k] = p0 / (p0 - a1[k]);
          }
        }
        if (!ok)
          out.push_back(std::move(bad));
        else
          out.push_back(modular_entry(key(2), eq, g, c2,
                                      ExponentField(g, std::move(expo)),
                                      &part.region2));
      }
      out.push_back(l1_entry(key(3), eq, g, spec.coefficient("c3"), part.region2));
    }

    if (!r3) {
      out.push_back(skipped_entry(key(4), eq, "region 3 is empty"));
      out.push_back(skipped_entry(key(5), eq, "region 3 is empty"));
    } else {
      out.push_back(floor_entry(key(4), eq, g, spec.coefficient("c4"),
                                part.region3, spec.floor));
      out.push_back(l1_entry(key(5), eq, g, spec.coefficient("c5"), part.region3));
    }
    return out;
  }

  // Variable kind: exponents mu, mu4 on the whole domain, mu1/mu2 on
  // region 2, mu3 on region 3.
  auto d = problem_derived(spec);
  const ExponentField* xi1 = spec.sign_growth ? &*spec.sign_growth : nullptr;
  Vec c2 = spec.coefficient("c2");
  bool need_mu12 = r2 && (xi1 || max_on(c2.abs(), part.region2) > 0.0);
  auto mf = mu_fields(part, d.theta, conjugate(d.theta), d.gamma, spec.growth,
                      need_mu12 ? xi1 : nullptr, spec.p_const, d.q1, d.ptilde1);

  out.push_back(modular_entry(key(0), eq, g, spec.coefficient("c0"), mf.mu, nullptr));
  out.push_back(modular_entry(key(1), eq, g, spec.coefficient("c1"), mf.mu4, nullptr));

  if (!r2) {
    out.push_back(skipped_entry(key(2), eq, "region 2 is empty"));
    out.push_back(skipped_entry(key(3), eq, "region 2 is empty"));
  } else if (!xi1) {
    if (max_on(c2.abs(), part.region2) == 0.0) {
      out.push_back(skipped_entry(key(2), eq, "coefficient vanishes on region 2"));
    } else {
      ConditionCheck ck;
      ck.condition_id = key(2);
      ck.paper_eq = eq;
      ck.pass = false;
      ck.note = "nonzero region-2 coefficient without a sign exponent";
      out.push_back(std::move(ck));
    }
    out.push_back(l1_entry(key(3), eq, g, spec.coefficient("c3"), part.region2));
  } else {
    out.push_back(modular_entry(key(2), eq, g, c2, mf.mu1.field, &mf.mu1.domain));
    out.push_back(modular_entry(key(3), eq, g, spec.coefficient("c3"),
                                mf.mu2.field, &mf.mu2.domain));
  }

  if (!r3) {
    out.push_back(skipped_entry(key(4), eq, "region 3 is empty"));
    out.push_back(skipped_entry(key(5), eq, "region 3 is empty"));
  } else {
    out.push_back(floor_entry(key(4), eq, g, spec.coefficient("c4"), part.region3,
                              spec.floor));
    out.push_back(modular_entry(key(5), eq, g, spec.coefficient("c5"),
                                mf.mu3.field, &mf.mu3.domain));
  }
  return out;
}

HypothesisReport check_hypotheses(const ProblemSpec& spec,
                                  const DomainPartition& part, int samples,
                                  uint64_t seed) {
  HypothesisReport rep;
  rep.checks.push_back(growth_check(spec, samples, seed));
  auto signs = sign_checks(spec, part, samples, seed);
  rep.checks.insert(rep.checks.end(), signs.begin(), signs.end());
  auto integ = coefficient_integrability(spec, part);
  rep.checks.insert(rep.checks.end(), integ.begin(), integ.end());

  if (spec.kind == ProblemKind::variable && spec.grid.analysis_dim() < 3) {
    ConditionCheck ck;
    ck.condition_id = "analysis-dimension";
    ck.note = "analysis dimension below 3 is outside the intended range of "
              "the variable-exponent problem";
    rep.checks.push_back(std::move(ck));
  }

  rep.pass = true;
  for (const auto& ck : rep.checks)
    if (!ck.skipped && !ck.pass) rep.pass = false;

  if (part.empty(2) && part.empty(3))
    rep.regime = "region1-only";
  else if (part.empty(3))
    rep.regime = "no-region3";
  else
    rep.regime = "general";
  return rep;
}

CoercivityReport coercivity_report(const GridFunction& u, const ProblemSpec& spec,
                                   const DomainPartition& part, double eps1,
                                   double eps2, double eps3) {
  if (spec.kind != ProblemKind::reduced)
    throw domain_error("coercivity bound applies to the constant-exponent problem");
  if (u.grid() != spec.grid) throw domain_error("coercivity: grid mismatch");
  if (part.grid != spec.grid) throw domain_error("partition grid mismatch");
  if (!u.dirichlet_zero())
    throw domain_error("coercivity bound needs a zero-trace function");
  for (double e : {eps1, eps2, eps3})
    if (!(e > 0.0 && e <= 1.0))
      throw config_error("Young weights must lie in (0, 1]");
  if (spec.growth.any_inf())
    throw domain_error("growth exponent must be finite");

  const Grid& g = spec.grid;
  double p0 = spec.p_const;
  double q0 = p0 / (p0 - 1.0);
  const Vec& uv = u.values();
  const Vec& alpha = spec.growth.values();

  CoercivityReport rep;
  rep.energy = pn_seminorm_power(u, PnIndex{p0 - 2.0, 2.0});

  Vec cu(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    cu[k] = spec.c.eval(g, k, uv[k]) * uv[k];
  rep.lhs = rep.energy + integrate(g, cu);

  Vec up0 = uv.abs().pow(p0);
  double m1 = part.empty(1) ? 0.0 : integrate(g, up0, part.region1);
  double m2 = part.empty(2) ? 0.0 : integrate(g, up0, part.region2);
  rep.eps_term = (eps1 + eps3) * m1 + eps2 * m2;

  double K = 0.0;
  if (!part.empty(1)) {
    Vec c0 = spec.coefficient("c0").abs();
    Vec c1 = spec.coefficient("c1").abs();
    Vec t0 = Vec::Zero(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      if (part.region1[k]) t0[k] = std::pow(c0[k], p0 / (p0 - alpha[k]));
    K += std::pow(eps1, -p0 / part.eta) * integrate(g, t0, part.region1);
    K += std::pow(eps3, -p0 * q0) * integrate(g, c1.pow(q0), part.region1);
  }
  if (!part.empty(2)) {
    Vec c2 = spec.coefficient("c2").abs();
    double c2max = max_on(c2, part.region2);
    if (c2max > 0.0) {
      if (!spec.sign_growth)
        throw domain_error("nonzero region-2 coefficient without a sign exponent");
      const Vec& a1 = spec.sign_growth->values();
      double a1p = max_on(a1, part.region2);
      if (!(a1p < p0))
        throw domain_error("region-2 sign exponent reaches the leading exponent");
      Vec t2 = Vec::Zero(g.size());
      for (Eigen::Index k = 0; k < g.size(); ++k)
        if (part.region2[k]) t2[k] = std::pow(c2[k], p0 / (p0 - a1[k]));
      K += std::pow(eps2, -a1p / (p0 - a1p)) * integrate(g, t2, part.region2);
    }
    K += integrate(g, spec.coefficient("c3").abs(), part.region2);
  }
  if (!part.empty(3))
    K += integrate(g, spec.coefficient("c5").abs(), part.region3);

  double sig3 = 0.0;
  if (!part.empty(3)) {
    Vec t3 = Vec::Zero(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      if (part.region3[k]) t3[k] = std::pow(std::abs(uv[k]), alpha[k]);
    sig3 = integrate(g, t3, part.region3);
  }

  rep.floor_term = spec.floor * sig3;
  rep.offset = K;
  rep.bound = rep.energy - rep.eps_term + rep.floor_term - K;
  double slack = 1e-9 * (1.0 + std::abs(rep.lhs) + std::abs(rep.bound));
  rep.holds = rep.lhs >= rep.bound - slack;
  rep.final_form_coefficient =
      rep.energy > 0.0 ? (rep.lhs - rep.floor_term + K) / rep.energy
                       : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

DualBound dual_bound_check(const GridFunction& u, const GridFunction& v, double p0) {
  if (!(p0 >= 2.0)) throw domain_error("dual bound needs p0 >= 2");
  if (u.grid() != v.grid()) throw domain_error("dual bound: grid mismatch");
  const Grid& g = u.grid();
  double q0 = p0 / (p0 - 1.0);

  Vec w = trapezoid_weights(g);
  Vec uw = u.values().abs().pow(p0 - 2.0);
  if (p0 == 2.0) uw.setOnes();

  double acc = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    Vec du = gradient(u, axis);
    Vec dv = gradient(v, axis);
    acc += (w * uw * du * dv).sum();
  }

  DualBound out;
  out.lhs = std::abs(acc);
  double power = pn_seminorm_power(u, PnIndex{(p0 - 2.0) * q0, q0});
  out.rhs_seminorm = std::pow(power, 1.0 / q0) * gradient_lp_norm(v, p0);
  out.rhs = std::pow(power, 1.0 / q0) * (lp_norm(v, p0) + gradient_lp_norm(v, p0));
  out.holds = out.lhs <= out.rhs;
  return out;
}

Vec discrete_operator_image(const ProblemSpec& spec, const GridFunction& u) {
  const Grid& g = spec.grid;
  if (u.grid() != g) throw domain_error("operator image: grid mismatch");

  GridFunction z = phi0(u, spec.p);
  const Vec& zv = z.values();
  const Vec& uv = u.values();
  double factor = spec.kind == ProblemKind::reduced
                      ? spec.leading_factor / (spec.p_const - 1.0)
                      : spec.leading_factor;

  Vec img = Vec::Zero(g.size());
  int nx = g.nodes(0);
  double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  if (g.dim() == 1) {
    for (int i = 1; i + 1 < nx; ++i)
      img[i] = factor * (2.0 * zv[i] - zv[i - 1] - zv[i + 1]) * ihx2 +
               spec.c.eval(g, i, uv[i]);
  } else {
    int ny = g.nodes(1);
    double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int iy = 1; iy + 1 < ny; ++iy) {
      for (int ix = 1; ix + 1 < nx; ++ix) {
        Eigen::Index k = g.index(ix, iy);
        double lap = (2.0 * zv[k] - zv[k - 1] - zv[k + 1]) * ihx2 +
                     (2.0 * zv[k] - zv[k - nx] - zv[k + nx]) * ihy2;
        img[k] = factor * lap + spec.c.eval(g, k, uv[k]);
      }
    }
  }
  return img;
}

WeakResidualReport weak_residual(const GridFunction& u, const ProblemSpec& spec) {
  const Vec& h = require_source(spec);
  const Grid& g = spec.grid;
  Vec img = discrete_operator_image(spec, u);
  double vol = g.spacing(0) * (g.dim() == 2 ? g.spacing(1) : 1.0);

  WeakResidualReport rep;
  rep.per_test = Vec::Zero(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (!g.on_boundary(k)) rep.per_test[k] = vol * (img[k] - h[k]);
  rep.max_abs = rep.per_test.size() ? rep.per_test.abs().maxCoeff() : 0.0;
  rep.scale = (h.size() ? h.abs().maxCoeff() : 0.0) * g.measure();
  return rep;
}

double weak_residual_single(const GridFunction& u, const ProblemSpec& spec,
                            const GridFunction& test) {
  const Vec& h = require_source(spec);
  const Grid& g = spec.grid;
  if (test.grid() != g) throw domain_error("test function: grid mismatch");
  if (!test.dirichlet_zero())
    throw domain_error("test function must carry the zero-trace flag");
  const Vec& tv = test.values();
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (g.on_boundary(k) && tv[k] != 0.0)
      throw domain_error("test function must vanish on the boundary");

  GridFunction z = phi0(u, spec.p);
  const Vec& zv = z.values();
  const Vec& uv = u.values();
  double factor = spec.kind == ProblemKind::reduced
                      ? spec.leading_factor / (spec.p_const - 1.0)
                      : spec.leading_factor;

  // Face-based gradient pairing: forward differences along each axis with
  // the uniform face weight.  Summation by parts against a zero-trace test
  // function reproduces the interior stencil exactly.
  double acc = 0.0;
  int nx = g.nodes(0);
  double hx = g.spacing(0);
  if (g.dim() == 1) {
    for (int i = 0; i + 1 < nx; ++i)
      acc += factor * (zv[i + 1] - zv[i]) * (tv[i + 1] - tv[i]) / hx;
  } else {
    int ny = g.nodes(1);
    double hy = g.spacing(1);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix + 1 < nx; ++ix) {
        Eigen::Index k = g.index(ix, iy);
        acc += factor * (zv[k + 1] - zv[k]) * (tv[k + 1] - tv[k]) * hy / hx;
      }
    for (int iy = 0; iy + 1 < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        Eigen::Index k = g.index(ix, iy);
        acc += factor * (zv[k + nx] - zv[k]) * (tv[k + nx] - tv[k]) * hx / hy;
      }
  }

  Vec w = trapezoid_weights(g);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    acc += w[k] * (spec.c.eval(g, k, uv[k]) - h[k]) * tv[k];
  return acc;
}

MembershipReport membership_report(const GridFunction& u, const ProblemSpec& spec) {
  const Grid& g = spec.grid;
  if (u.grid() != g) throw domain_error("membership report: grid mismatch");

  MembershipReport rep;
  if (spec.kind == ProblemKind::reduced) {
    double p0 = spec.p_const;
    double q0 = p0 / (p0 - 1.0);
    rep.entries.push_back(
        {"seminorm_zero_trace", pn_seminorm(u, PnIndex{(p0 - 2.0) * q0, q0})});
    rep.entries.push_back({"luxemburg_growth", luxemburg_norm(u, spec.growth)});
    return rep;
  }

  auto d = problem_derived(spec);
  double q1 = d.q1;
  int n = g.analysis_dim();
  const Vec& uv = u.values();
  Vec base = uv.abs();
  Vec w = trapezoid_weights(g);
  const Vec& pv = spec.p.values();

  for (int axis = 0; axis < g.dim(); ++axis) {
    Vec du = gradient(u, axis);
    Vec integrand(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      integrand[k] = std::pow(base[k], (pv[k] - 2.0) * q1) *
                     std::pow(std::abs(du[k]), q1);
    rep.entries.push_back({"weighted_gradient_q1_axis" + std::to_string(axis),
                           std::pow((w * integrand).sum(), 1.0 / q1)});
  }

  Vec high = q1 * (pv - 1.0) * double(n) / (double(n) - q1);
  rep.entries.push_back(
      {"luxemburg_high", luxemburg_norm(u, ExponentField(g, high))});

  Vec xg = spec.growth.values() + d.gamma.values();
  rep.entries.push_back(
      {"luxemburg_growth_order", luxemburg_norm(u, ExponentField(g, xg))});

  // q1-norm of |u|^{p-1} ln|u| and its explicit moment bound, with the
  // weight gap to the high exponent as the epsilon.
  Vec zeta = q1 * (pv - 1.0);
  Vec logint(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double a = base[k];
    logint[k] = a == 0.0 ? 0.0
                         : std::pow(a, zeta[k]) *
                               std::pow(std::abs(std::log(a)), q1);
  }
  double lhs = (w * logint).sum();
  rep.entries.push_back({"log_weight_q1_norm", std::pow(lhs, 1.0 / q1)});

  double eps = (high - zeta).minCoeff();
  auto consts = log_inequality_constants(ExponentField(g, zeta), q1, eps);
  Vec shifted(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    shifted[k] = std::pow(base[k], zeta[k] + eps);
  rep.log_moment_applicable = true;
  rep.log_moment_lhs = lhs;
  rep.log_moment_bound = consts.M1 * (w * shifted).sum() + consts.M2;
  rep.log_moment_ok = rep.log_moment_lhs <=
                      rep.log_moment_bound * (1.0 + 1e-12) + 1e-300;
  return rep;
}

}  // namespace vex
