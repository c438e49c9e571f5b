#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "vex/estimates.hpp"

using namespace vex;

namespace {

Grid line(int n = 65, int adim = 3) { return Grid(0.0, 1.0, n, adim); }

GridFunction random_zero_trace(const Grid& g, std::mt19937_64& rng,
                               double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Vec v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    v[k] = g.on_boundary(k) ? 0.0 : dist(rng);
  return GridFunction(g, std::move(v), true);
}

// Constant-exponent spec with c(x, u) = u, growth 2, c0 = 1.
ProblemSpec linear_spec(const Grid& g, double p0 = 3.0) {
  ProblemSpec spec(g, ExponentField::constant(g, p0),
                   ExponentField::constant(g, 2.0));
  spec.kind = ProblemKind::reduced;
  spec.p_const = p0;
  spec.c.expr = parse_expression("u");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.source = GridFunction::constant(g, 1.0);
  return spec;
}

}  // namespace

TEST_CASE("growth check passes at equality with zero margin") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  ConditionCheck ck = growth_check(spec, 400, 0);
  CHECK(ck.pass);
  CHECK(ck.margin == doctest::Approx(0.0));
  CHECK(ck.paper_eq == "3.1");
}

TEST_CASE("mis-declared growth fails with a witness") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  spec.c.expr = parse_expression("u*abs(u)");  // quadratic against linear bound
  spec.coeff["c1"] = Vec::Ones(g.size());
  ConditionCheck ck = growth_check(spec, 400, 0);
  CHECK(!ck.pass);
  CHECK(ck.margin < 0.0);
  CHECK(ck.witness_node >= 0);
  CHECK(ck.witness_node < g.size());
  CHECK(std::abs(ck.witness_tau) > 1.0);
  // The bound must actually be violated at the witness.
  double lhs = spec.c.eval(g, ck.witness_node, ck.witness_tau);
  double rhs = std::abs(ck.witness_tau) + 1.0;
  CHECK(std::abs(lhs) > rhs);
}

TEST_CASE("region-2 sign condition with a declared exponent") {
  Grid g = line(65, 3);
  // p0 = 2, growth 2 everywhere: all of region 2 (ptilde = 6).
  ProblemSpec spec(g, ExponentField::constant(g, 2.0),
                   ExponentField::constant(g, 2.0));
  spec.kind = ProblemKind::reduced;
  spec.p_const = 2.0;
  spec.c.expr = parse_expression("-sgnpow(u, 0.5)");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.coeff["c1"] = Vec::Ones(g.size());
  spec.coeff["c2"] = Vec::Ones(g.size());
  spec.sign_growth = ExponentField::constant(g, 1.5);
  spec.source = GridFunction::constant(g, 1.0);

  DomainPartition part = problem_partition(spec);
  CHECK(part.count(2) == g.size());

  auto checks = sign_checks(spec, part, 400, 0);
  REQUIRE(checks.size() == 2);
  CHECK(checks[0].condition_id == "sign-region2");
  CHECK(checks[0].pass);  // -|t|^{3/2} >= -1 * |t|^{1.5} with equality
  CHECK(std::abs(checks[0].margin) < 1e-4);  // ulp slack at large tau
  CHECK(checks[1].skipped);  // region 3 empty

  // Same coefficient without the declared exponent: refuse.
  ProblemSpec bad = spec;
  bad.sign_growth.reset();
  auto bad_checks = sign_checks(bad, part, 400, 0);
  CHECK(!bad_checks[0].pass);
  CHECK(bad_checks[0].note.find("sign exponent") != std::string::npos);
}

TEST_CASE("vacuous region-2 bound is still sampled") {
  Grid g = line();
  ProblemSpec spec(g, ExponentField::constant(g, 2.0),
                   ExponentField::constant(g, 2.0));
  spec.kind = ProblemKind::reduced;
  spec.p_const = 2.0;
  spec.c.expr = parse_expression("u");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.source = GridFunction::constant(g, 1.0);

  DomainPartition part = problem_partition(spec);
  auto checks = sign_checks(spec, part, 400, 0);
  CHECK(checks[0].pass);  // u * t = t^2 >= 0
  CHECK(checks[0].note.find("without the power term") != std::string::npos);
}

TEST_CASE("region-3 floor condition at equality") {
  Grid g = line(65, 4);
  // p0 = 2, n = 4: ptilde = 4; growth 4 puts every node in region 3.
  ProblemSpec spec(g, ExponentField::constant(g, 2.0),
                   ExponentField::constant(g, 4.0));
  spec.kind = ProblemKind::reduced;
  spec.p_const = 2.0;
  spec.c.expr = parse_expression("sgnpow(u, 3)");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.coeff["c4"] = Vec::Ones(g.size());
  spec.floor = 1.0;
  spec.source = GridFunction::constant(g, 1.0);

  DomainPartition part = problem_partition(spec);
  CHECK(part.count(3) == g.size());

  auto checks = sign_checks(spec, part, 400, 0);
  CHECK(checks[0].skipped);  // region 2 empty
  CHECK(checks[1].pass);     // t^4 = c4 |t|^4 up to rounding

  auto integ = coefficient_integrability(spec, part);
  // c4 floor entry: present, passing, margin c4 - floor = 0.
  bool found = false;
  for (const auto& ck : integ)
    if (ck.condition_id == "integrability-c4") {
      found = true;
      CHECK(ck.pass);
      CHECK(ck.margin == doctest::Approx(0.0));
      CHECK(ck.value == doctest::Approx(1.0));
    }
  CHECK(found);

  // Without a positive floor the entry fails.
  ProblemSpec no_floor = spec;
  no_floor.floor = 0.0;
  auto integ2 = coefficient_integrability(no_floor, part);
  for (const auto& ck : integ2)
    if (ck.condition_id == "integrability-c4") CHECK(!ck.pass);
}

TEST_CASE("integrability entries evaluate the documented modulars") {
  Grid g = line(201);
  ProblemSpec spec = linear_spec(g);  // p0 = 3, growth 2: region 1 only
  Vec x(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) x[k] = g.coord(k, 0);
  spec.coeff["c0"] = x;
  spec.coeff["c1"] = x;

  DomainPartition part = problem_partition(spec);
  CHECK(part.count(1) == g.size());

  auto integ = coefficient_integrability(spec, part);
  // beta on region 1 is p0 a*/(p0 - a) = 3*2/1 = 6; beta1 is a* = 2.
  for (const auto& ck : integ) {
    if (ck.condition_id == "integrability-c0")
      CHECK(ck.value == doctest::Approx(1.0 / 7.0).epsilon(1e-3));
    if (ck.condition_id == "integrability-c1")
      CHECK(ck.value == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  }

  // A coefficient with an unbounded node breaks the finiteness test.
  ProblemSpec diverging = spec;
  Vec c0 = Vec::Ones(g.size());
  c0[0] = std::numeric_limits<double>::infinity();
  diverging.coeff["c0"] = c0;
  auto integ2 = coefficient_integrability(diverging, part);
  CHECK(!integ2[0].pass);
}

TEST_CASE("hypothesis report aggregates and labels the regime") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  DomainPartition part = problem_partition(spec);
  HypothesisReport rep = check_hypotheses(spec, part);
  CHECK(rep.pass);
  CHECK(rep.regime == "region1-only");
  CHECK(rep.checks.size() >= 9);

  spec.c.expr = parse_expression("u*abs(u)");
  HypothesisReport bad = check_hypotheses(spec, part);
  CHECK(!bad.pass);
}

TEST_CASE("coercivity equality on a pure region-3 instance") {
  Grid g = line(65, 4);
  ProblemSpec spec(g, ExponentField::constant(g, 2.0),
                   ExponentField::constant(g, 4.0));
  spec.kind = ProblemKind::reduced;
  spec.p_const = 2.0;
  spec.c.expr = parse_expression("sgnpow(u, 3)");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.coeff["c4"] = Vec::Ones(g.size());
  spec.floor = 1.0;
  spec.source = GridFunction::constant(g, 1.0);
  DomainPartition part = problem_partition(spec);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    GridFunction u = random_zero_trace(g, rng);
    CoercivityReport rep = coercivity_report(u, spec, part);
    CHECK(rep.holds);
    // lhs = energy + integral |u|^4; bound = energy + floor * integral |u|^4
    // with no Young offsets: exact equality.
    CHECK(rep.lhs == doctest::Approx(rep.bound).epsilon(1e-13));
    CHECK(rep.offset == 0.0);
    CHECK(rep.final_form_coefficient == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coercivity bound holds across regimes") {
  std::mt19937_64 rng(9);

  // Region 1 only: p0 = 3, growth 2, c = u.
  {
    Grid g = line();
    ProblemSpec spec = linear_spec(g);
    spec.coeff["c1"] = Vec::Constant(g.size(), 0.5);
    DomainPartition part = problem_partition(spec);
    for (int trial = 0; trial < 50; ++trial) {
      CoercivityReport rep =
          coercivity_report(random_zero_trace(g, rng, 2.0), spec, part);
      CHECK(rep.holds);
    }
  }

  // Regions 1 and 2 with a declared sign exponent.
  {
    Grid g = line();
    Vec alpha(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      alpha[k] = 2.0 + 2.0 * g.coord(k, 0);
    ProblemSpec spec(g, ExponentField::constant(g, 3.0),
                     ExponentField(g, std::move(alpha)));
    spec.kind = ProblemKind::reduced;
    spec.p_const = 3.0;
    spec.c.expr = parse_expression("u - 1");
    spec.coeff["c0"] = Vec::Ones(g.size());
    spec.coeff["c1"] = Vec::Constant(g.size(), 2.0);
    spec.coeff["c2"] = Vec::Ones(g.size());
    spec.coeff["c3"] = Vec::Ones(g.size());
    spec.sign_growth = ExponentField::constant(g, 1.0);
    spec.source = GridFunction::constant(g, 1.0);
    DomainPartition part = problem_partition(spec);
    CHECK(!part.empty(1));
    CHECK(!part.empty(2));
    for (int trial = 0; trial < 50; ++trial) {
      CoercivityReport rep =
          coercivity_report(random_zero_trace(g, rng, 2.0), spec, part);
      CHECK(rep.holds);
    }
  }
}

TEST_CASE("coercivity validates its inputs") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  DomainPartition part = problem_partition(spec);
  GridFunction u = GridFunction::constant(g, 1.0);  // no zero-trace flag
  CHECK_THROWS_AS(coercivity_report(u, spec, part), domain_error);

  std::mt19937_64 rng(1);
  GridFunction ok = random_zero_trace(g, rng);
  CHECK_THROWS_AS(coercivity_report(ok, spec, part, 1.5), config_error);
  CHECK_THROWS_AS(coercivity_report(ok, spec, part, 0.1, 0.0), config_error);
}

TEST_CASE("dual bound holds with the seminorm cap") {
  std::mt19937_64 rng(13);
  Grid g = line(81);
  for (double p0 : {2.0, 3.0, 4.0}) {
    for (int trial = 0; trial < 30; ++trial) {
      GridFunction u = random_zero_trace(g, rng);
      GridFunction v = random_zero_trace(g, rng);
      DualBound db = dual_bound_check(u, v, p0);
      CHECK(db.holds);
      CHECK(db.lhs <= db.rhs_seminorm * (1.0 + 1e-12));  // exact Holder cap
      CHECK(db.rhs_seminorm <= db.rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("dual bound equality razor at p0 = 2") {
  std::mt19937_64 rng(29);
  Grid g = line(81);
  GridFunction u = random_zero_trace(g, rng);
  DualBound db = dual_bound_check(u, u, 2.0);
  // lhs = sum integral |Du|^2 = seminorm product exactly.
  CHECK(db.lhs == doctest::Approx(db.rhs_seminorm).epsilon(1e-12));
  CHECK(db.holds);
}

TEST_CASE("weak residual vanishes for a stencil-manufactured pair") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  Vec v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double x = g.coord(k, 0);
    v[k] = x * (1.0 - x);
  }
  GridFunction u_star(g, std::move(v), true);
  spec.source = GridFunction(g, discrete_operator_image(spec, u_star), false);
  spec.manufactured = ManufacturedSolution{u_star, true};

  WeakResidualReport rep = weak_residual(u_star, spec);
  CHECK(rep.max_abs <= 1e-13 * std::max(1.0, rep.scale));
  CHECK(rep.scale > 0.0);
}

TEST_CASE("operator image vanishes on the boundary rows") {
  Grid g(0.0, 1.0, 17, 3);
  ProblemSpec spec = linear_spec(g);
  GridFunction u = GridFunction::constant(g, 0.0, true);
  Vec img = discrete_operator_image(spec, u);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (g.on_boundary(k)) CHECK(img[k] == 0.0);
}

TEST_CASE("single-test residual agrees with the nodal report") {
  std::mt19937_64 rng(37);
  for (int dim = 1; dim <= 2; ++dim) {
    Grid g = dim == 1 ? Grid(0.0, 1.0, 33, 3)
                      : Grid({0.0, 0.0}, {1.0, 1.0}, {9, 11}, 3);
    ProblemSpec spec(g, ExponentField::constant(g, 3.0),
                     ExponentField::constant(g, 2.0));
    spec.kind = ProblemKind::reduced;
    spec.p_const = 3.0;
    spec.c.expr = parse_expression("u");
    spec.coeff["c0"] = Vec::Ones(g.size());
    Vec h(g.size());
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index k = 0; k < g.size(); ++k) h[k] = dist(rng);
    spec.source = GridFunction(g, std::move(h), false);

    GridFunction u = random_zero_trace(g, rng);
    WeakResidualReport rep = weak_residual(u, spec);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      if (g.on_boundary(k)) continue;
      Vec hat = Vec::Zero(g.size());
      hat[k] = 1.0;
      double single = weak_residual_single(u, spec, GridFunction(g, hat, true));
      CHECK(single == doctest::Approx(rep.per_test[k]).epsilon(1e-10));
      CHECK(std::abs(single - rep.per_test[k]) <= 1e-13 * (1.0 + rep.scale));
    }
  }
}

TEST_CASE("test functions are validated") {
  Grid g = line(33);
  ProblemSpec spec = linear_spec(g);
  std::mt19937_64 rng(41);
  GridFunction u = random_zero_trace(g, rng);

  Vec flat = Vec::Ones(g.size());
  CHECK_THROWS_AS(weak_residual_single(u, spec, GridFunction(g, flat, true)),
                  domain_error);  // nonzero boundary values
  Vec hat = Vec::Zero(g.size());
  hat[5] = 1.0;
  CHECK_THROWS_AS(weak_residual_single(u, spec, GridFunction(g, hat, false)),
                  domain_error);  // missing flag
}

TEST_CASE("membership report for the constant kind") {
  Grid g = line();
  ProblemSpec spec = linear_spec(g);
  std::mt19937_64 rng(43);
  GridFunction u = random_zero_trace(g, rng);
  MembershipReport rep = membership_report(u, spec);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.entries[0].quantity == "seminorm_zero_trace");
  CHECK(rep.entries[0].value ==
        doctest::Approx(pn_seminorm(u, PnIndex{1.5, 1.5})).epsilon(1e-13));
  CHECK(rep.entries[1].quantity == "luxemburg_growth");
  CHECK(!rep.log_moment_applicable);
}

TEST_CASE("membership report for the variable kind bounds the log moment") {
  Grid g = line(101);
  Vec pv(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) pv[k] = 2.0 + g.coord(k, 0) / 2.0;
  ProblemSpec spec(g, ExponentField(g, std::move(pv)),
                   ExponentField::constant(g, 2.0));
  spec.kind = ProblemKind::variable;
  spec.p_const = 2.0;
  spec.c.expr = parse_expression("u");
  spec.coeff["c0"] = Vec::Ones(g.size());
  spec.source = GridFunction::constant(g, 1.0);

  std::mt19937_64 rng(47);
  GridFunction u = random_zero_trace(g, rng, 2.0);
  MembershipReport rep = membership_report(u, spec);
  REQUIRE(rep.entries.size() == 4);
  CHECK(rep.entries[0].quantity == "weighted_gradient_q1_axis0");
  CHECK(rep.entries[1].quantity == "luxemburg_high");
  CHECK(rep.entries[2].quantity == "luxemburg_growth_order");
  CHECK(rep.entries[3].quantity == "log_weight_q1_norm");
  CHECK(rep.log_moment_applicable);
  CHECK(rep.log_moment_ok);
  CHECK(rep.log_moment_lhs <= rep.log_moment_bound * (1.0 + 1e-12));
}
