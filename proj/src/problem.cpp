#include "vex/problem.hpp"

#include <cmath>

namespace vex {

double Nonlinearity::eval(const Grid& g, Eigen::Index node, double tau) const {
  if (!expr) throw domain_error("nonlinearity has no expression");
  std::map<std::string, double> fields;
  for (const auto& [name, values] : bindings) fields[name] = values[node];
  EvalEnv env;
  env.x = g.coord(node, 0);
  env.y = g.dim() == 2 ? g.coord(node, 1) : 0.0;
  env.u = tau;
  env.has_u = true;
  env.fields = &fields;
  return expr->eval(env);
}

double Nonlinearity::dtau(const Grid& g, Eigen::Index node, double tau) const {
  double step = 1e-6 * std::max(1.0, std::abs(tau));
  return (eval(g, node, tau + step) - eval(g, node, tau - step)) / (2.0 * step);
}

Vec ProblemSpec::coefficient(const std::string& key) const {
  auto it = coeff.find(key);
  if (it != coeff.end()) return it->second;
  return Vec::Zero(grid.size());
}

bool ProblemSpec::coefficient_is_zero(const std::string& key) const {
  auto it = coeff.find(key);
  return it == coeff.end() || (it->second == 0.0).all();
}

DerivedFields problem_derived(const ProblemSpec& spec) {
  return derived_fields(spec.p, spec.p_const, spec.growth);
}

DomainPartition problem_partition(const ProblemSpec& spec) {
  if (spec.pinned_partition) return *spec.pinned_partition;
  if (spec.kind == ProblemKind::reduced) {
    auto crit = critical_exponents(spec.p_const, spec.grid.analysis_dim());
    return partition(spec.growth, spec.p, spec.eta,
                     ExponentField::constant(spec.grid, crit.ptilde));
  }
  DerivedFields d = problem_derived(spec);
  return partition(spec.growth, spec.p, spec.eta, d.ptilde_field);
}

}  // namespace vex
