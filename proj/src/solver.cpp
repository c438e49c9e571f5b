#include "vex/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>

#include "vex/expr.hpp"

namespace vex {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct InteriorMap {
  std::vector<Eigen::Index> to_node;
  std::vector<Eigen::Index> to_row;  // -1 on boundary nodes

  Eigen::Index count() const { return Eigen::Index(to_node.size()); }
};

InteriorMap build_interior_map(const Grid& g) {
  InteriorMap m;
  m.to_row.assign(size_t(g.size()), -1);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (g.on_boundary(k)) continue;
    m.to_row[size_t(k)] = m.count();
    m.to_node.push_back(k);
  }
  return m;
}

// factor * L_h on the interior unknowns under zero boundary data.
SpMat interior_laplacian(const Grid& g, const InteriorMap& m, double factor) {
  int nx = g.nodes(0);
  double cx = factor / (g.spacing(0) * g.spacing(0));
  double cy = g.dim() == 2 ? factor / (g.spacing(1) * g.spacing(1)) : 0.0;

  std::vector<Triplet> trips;
  trips.reserve(size_t(m.count()) * 5);
  for (Eigen::Index r = 0; r < m.count(); ++r) {
    Eigen::Index k = m.to_node[size_t(r)];
    double diag = 2.0 * cx + (g.dim() == 2 ? 2.0 * cy : 0.0);
    trips.emplace_back(int(r), int(r), diag);
    auto couple = [&](Eigen::Index nb, double c) {
      Eigen::Index rr = m.to_row[size_t(nb)];
      if (rr >= 0) trips.emplace_back(int(r), int(rr), -c);
    };
    couple(k - 1, cx);
    couple(k + 1, cx);
    if (g.dim() == 2) {
      couple(k - nx, cy);
      couple(k + nx, cy);
    }
  }
  SpMat L(m.count(), m.count());
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

struct ReducedSystem {
  const ProblemSpec& spec;
  const InteriorMap& m;
  const SpMat& L;
  Vec h_int;
  double inv_exponent;  // 1/(p0-1)

  double primal(double w) const { return sgnpow(w, inv_exponent); }

  Vec residual(const Vec& w_int, Vec* u_out = nullptr) const {
    Vec cu(m.count());
    for (Eigen::Index r = 0; r < m.count(); ++r) {
      double uv = primal(w_int[r]);
      if (u_out) (*u_out)[r] = uv;
      cu[r] = spec.c.eval(spec.grid, m.to_node[size_t(r)], uv);
    }
    return (L * w_int.matrix()).array() + cu - h_int;
  }
};

double max_norm(const Vec& v) { return v.size() ? v.abs().maxCoeff() : 0.0; }

}  // namespace

GridFunction manufactured_source(const ProblemSpec& spec,
                                 const GridFunction& u_star) {
  return GridFunction(spec.grid, discrete_operator_image(spec, u_star));
}

SolveReport solve_reduced(const ProblemSpec& spec, const SolverConfig& cfg) {
  if (spec.kind != ProblemKind::reduced)
    throw domain_error("solve_reduced expects the constant-exponent form");
  if (!(spec.p_const >= 2.0))
    throw domain_error("leading exponent must be at least 2");
  if (!(cfg.tolerance > 0.0)) throw config_error("tolerance must be positive");
  if (cfg.delta_reg < 0.0) throw config_error("delta_reg must be nonnegative");
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
    throw config_error("relaxation must lie in (0, 1]");
  if (!spec.source) throw domain_error("problem has no source term");
  if (!(spec.leading_factor > 0.0))
    throw domain_error("leading factor must be positive");

  const Grid& g = spec.grid;
  double p0 = spec.p_const;
  double factor = spec.leading_factor / (p0 - 1.0);

  InteriorMap m = build_interior_map(g);
  SpMat L = interior_laplacian(g, m, factor);

  Eigen::SparseLU<SpMat> laplace;
  laplace.compute(L);
  if (laplace.info() != Eigen::Success)
    throw numerical_error("interior Laplacian factorization failed");

  ReducedSystem sys{spec, m, L, Vec(m.count()), 1.0 / (p0 - 1.0)};
  const Vec& h = spec.source->values();
  for (Eigen::Index r = 0; r < m.count(); ++r)
    sys.h_int[r] = h[m.to_node[size_t(r)]];

  // Linear first guess: freeze the nonlinearity at zero argument.
  Vec rhs0(m.count());
  for (Eigen::Index r = 0; r < m.count(); ++r)
    rhs0[r] = sys.h_int[r] - spec.c.eval(g, m.to_node[size_t(r)], 0.0);
  Vec w_int = laplace.solve(rhs0.matrix()).array();

  Vec u_int(m.count());
  Vec F = sys.residual(w_int, &u_int);
  double fn = max_norm(F);

  std::vector<IterationRecord> trace;
  trace.push_back({0, fn, 1.0});

  int step = 0;
  bool converged = fn <= cfg.tolerance;
  bool newton_stuck = false;

  Eigen::SparseLU<SpMat> newton;
  bool pattern_ready = false;

  while (!converged && !newton_stuck && step < cfg.max_steps) {
    ++step;
    SpMat J = L;
    for (Eigen::Index r = 0; r < m.count(); ++r) {
      double wv = std::max(std::abs(w_int[r]), cfg.delta_reg);
      double dinv = sys.inv_exponent * std::pow(wv, sys.inv_exponent - 1.0);
      double dc = spec.c.dtau(g, m.to_node[size_t(r)], u_int[r]);
      J.coeffRef(int(r), int(r)) += dc * dinv;
    }
    if (!pattern_ready) {
      newton.analyzePattern(J);
      pattern_ready = true;
    }
    newton.factorize(J);
    if (newton.info() != Eigen::Success) {
      newton_stuck = true;
      trace.push_back({step, fn, 0.0});
      break;
    }
    Vec delta = newton.solve((-F).matrix()).array();

    double s = 1.0;
    bool accepted = false;
    while (s >= cfg.min_damping) {
      Vec trial = w_int + s * delta;
      Vec u_trial(m.count());
      Vec Ft = sys.residual(trial, &u_trial);
      double fnt = max_norm(Ft);
      if (fnt < fn) {
        w_int = std::move(trial);
        u_int = std::move(u_trial);
        F = std::move(Ft);
        fn = fnt;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    trace.push_back({step, fn, accepted ? s : 0.0});
    if (!accepted) {
      newton_stuck = true;
      break;
    }
    converged = fn <= cfg.tolerance;
  }

  bool used_fallback = false;
  if (!converged && cfg.fixed_point_fallback) {
    used_fallback = true;
    // Under-relaxed inverse-Laplacian sweep; reuses the factorization.
    for (int fp = 0; !converged && fp < cfg.fixed_point_max_steps; ++fp) {
      Vec target(m.count());
      for (Eigen::Index r = 0; r < m.count(); ++r)
        target[r] = sys.h_int[r] -
                    spec.c.eval(g, m.to_node[size_t(r)], sys.primal(w_int[r]));
      Vec wnew = laplace.solve(target.matrix()).array();
      w_int = (1.0 - cfg.relaxation) * w_int + cfg.relaxation * wnew;
      F = sys.residual(w_int, &u_int);
      fn = max_norm(F);
      ++step;
      trace.push_back({step, fn, cfg.relaxation});
      converged = fn <= cfg.tolerance;
    }
  }

  Vec w_full = Vec::Zero(g.size());
  for (Eigen::Index r = 0; r < m.count(); ++r)
    w_full[m.to_node[size_t(r)]] = w_int[r];
  GridFunction w(g, std::move(w_full), true);
  GridFunction u = phi0_inverse(w, spec.p);

  SolveReport rep(std::move(u), std::move(w));
  rep.status = converged ? "solved" : "not-converged";
  rep.used_fallback = used_fallback;
  rep.iterations = step;
  rep.final_residual = fn;
  rep.trace = std::move(trace);
  rep.weak = weak_residual(rep.u, spec);
  rep.memberships = membership_report(rep.u, spec);
  return rep;
}

SolveReport solve_main(const ProblemSpec& spec, const SolverConfig& cfg) {
  if (spec.kind != ProblemKind::variable)
    throw domain_error("solve_main expects the variable-exponent form");

  DomainPartition part = problem_partition(spec);
  ReduceResult red = reduce_problem(spec, part);
  SolveReport inner = solve_reduced(red.reduced, cfg);

  GridFunction v = inner.u;
  GridFunction u = phi1_inverse(v, red.derived.gamma);

  SolveReport rep(std::move(u), std::move(inner.w));
  rep.v = std::move(v);
  rep.status = inner.status;
  rep.used_fallback = inner.used_fallback;
  rep.iterations = inner.iterations;
  rep.final_residual = inner.final_residual;
  rep.trace = std::move(inner.trace);
  rep.weak = weak_residual(rep.u, spec);
  rep.memberships = membership_report(rep.u, spec);
  for (const auto& e : inner.memberships.entries)
    rep.memberships.entries.push_back({"reduced:" + e.quantity, e.value});
  return rep;
}

StudyReport refinement_study(const std::function<ProblemSpec(int)>& make,
                             const std::vector<int>& node_counts,
                             const SolverConfig& cfg) {
  if (node_counts.size() < 2)
    throw config_error("refinement study needs at least two grids");

  StudyReport out;
  double prev_h = 0.0, prev_eu = 0.0, prev_ew = 0.0;
  for (size_t i = 0; i < node_counts.size(); ++i) {
    ProblemSpec spec = make(node_counts[i]);
    if (!spec.manufactured)
      throw config_error("refinement study needs a manufactured solution");

    SolveReport rep = spec.kind == ProblemKind::reduced ? solve_reduced(spec, cfg)
                                                        : solve_main(spec, cfg);
    if (!rep.solved())
      throw numerical_error("study solve did not converge at " +
                            std::to_string(node_counts[i]) + " nodes");

    const GridFunction& u_star = spec.manufactured->u_star;
    GridFunction w_star = phi0(u_star, spec.p);
    double eu = max_norm(rep.u.values() - u_star.values());
    double ew = max_norm(rep.w.values() - w_star.values());
    double h = spec.grid.spacing(0);
    if (spec.grid.dim() == 2) h = std::max(h, spec.grid.spacing(1));

    StudyRow row{node_counts[i], h, rep.iterations, eu, ew, 0.0, 0.0};
    if (i > 0) {
      if (eu > 0.0 && prev_eu > 0.0)
        row.order_u = std::log(prev_eu / eu) / std::log(prev_h / h);
      if (ew > 0.0 && prev_ew > 0.0)
        row.order_w = std::log(prev_ew / ew) / std::log(prev_h / h);
      if (!(ew < prev_ew)) out.monotone_w = false;
    }
    out.rows.push_back(row);
    prev_h = h;
    prev_eu = eu;
    prev_ew = ew;
  }
  return out;
}

}  // namespace vex
