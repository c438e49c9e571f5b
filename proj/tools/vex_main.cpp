// Command-line front end: hypothesis checks, solves, norm tables, the
// constant-exponent rewrite, and grid-refinement studies over problem files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vex/config.hpp"
#include "vex/estimates.hpp"
#include "vex/io.hpp"
#include "vex/modular.hpp"
#include "vex/pn_space.hpp"
#include "vex/solver.hpp"

namespace fs = std::filesystem;
using namespace vex;

namespace {

struct Options {
  std::string problem;
  std::string out = ".";
  std::optional<double> eta;
  std::optional<double> p1;
  std::optional<int> analysis_dim;
  std::optional<uint64_t> seed;
  bool force = false;
  int samples = 400;
  double tolerance = 1e-10;
  int max_steps = 100;
  std::vector<int> grids;
};

Overrides to_overrides(const Options& o) {
  Overrides ov;
  ov.eta = o.eta;
  ov.p1 = o.p1;
  ov.analysis_dim = o.analysis_dim;
  ov.seed = o.seed;
  return ov;
}

struct OutputDir {
  fs::path dir;
  std::vector<std::string> files;

  explicit OutputDir(const std::string& d) : dir(d) {
    fs::create_directories(dir);
  }
  std::string write(const std::string& name, const std::string& content) {
    std::string p = (dir / name).string();
    write_text_file(p, content);
    files.push_back(p);
    return p;
  }
  void track(const std::string& path) { files.push_back(path); }
  void manifest(const std::string& command, const LoadedProblem& lp) {
    Json m;
    m["command"] = command;
    m["problem"] = fs::path(lp.path).filename().string();
    m["problem_hash"] = lp.content_hash;
    m["seed"] = lp.seed;
    Json outs = Json::object();
    for (const auto& f : files)
      outs[fs::path(f).filename().string()] = file_hash_hex(f);
    m["outputs"] = outs;
    write_text_file((dir / "manifest.json").string(), dump_json(m));
  }
};

Json to_json(const ConditionCheck& ck) {
  Json j;
  j["condition_id"] = ck.condition_id;
  j["paper_eq"] = ck.paper_eq;
  j["pass"] = ck.pass;
  j["skipped"] = ck.skipped;
  j["margin"] = ck.margin;
  if (!std::isnan(ck.value)) j["value"] = ck.value;
  j["witness"] = Json{{"node", ck.witness_node}, {"tau", ck.witness_tau}};
  if (!ck.note.empty()) j["note"] = ck.note;
  return j;
}

Json to_json(const HypothesisReport& rep, const ProblemSpec& spec,
             const DomainPartition& part, const LoadedProblem& lp, int samples) {
  const Grid& g = spec.grid;
  Vec ones = Vec::Ones(g.size());
  Json j;
  j["pass"] = rep.pass;
  j["regime"] = rep.regime;
  j["problem"] = lp.name;
  j["kind"] = spec.kind == ProblemKind::reduced ? "constant" : "variable";
  j["samples"] = samples;
  j["seed"] = lp.seed;
  Json checks = Json::array();
  for (const auto& ck : rep.checks) checks.push_back(to_json(ck));
  j["checks"] = checks;
  j["partition"] = Json{
      {"eta", part.eta},
      {"counts", Json{{"region1", part.count(1)},
                      {"region2", part.count(2)},
                      {"region3", part.count(3)}}},
      {"measures", Json{{"region1", integrate(g, ones, part.region1)},
                        {"region2", integrate(g, ones, part.region2)},
                        {"region3", integrate(g, ones, part.region3)}}}};
  return j;
}

void print_checks(const HypothesisReport& rep) {
  for (const auto& ck : rep.checks) {
    const char* tag = ck.skipped ? "SKIP" : (ck.pass ? "PASS" : "FAIL");
    std::printf("[%s] %-18s", tag, ck.condition_id.c_str());
    if (!ck.paper_eq.empty()) std::printf(" (%s)", ck.paper_eq.c_str());
    if (!ck.skipped && !std::isnan(ck.value))
      std::printf(" value=%s", format_double(ck.value).c_str());
    if (!ck.skipped && std::isfinite(ck.margin))
      std::printf(" margin=%s", format_double(ck.margin).c_str());
    if (!ck.note.empty()) std::printf("  %s", ck.note.c_str());
    std::printf("\n");
  }
  std::printf("hypotheses: %s (regime %s)\n", rep.pass ? "PASS" : "FAIL",
              rep.regime.c_str());
}

Json to_json(const MembershipReport& mem) {
  Json entries = Json::object();
  for (const auto& e : mem.entries) entries[e.quantity] = e.value;
  Json j;
  j["entries"] = entries;
  if (mem.log_moment_applicable)
    j["log_moment"] = Json{{"lhs", mem.log_moment_lhs},
                           {"bound", mem.log_moment_bound},
                           {"ok", mem.log_moment_ok}};
  return j;
}

std::string trace_csv(const std::vector<IterationRecord>& trace) {
  std::string out = "step,residual,damping\n";
  for (const auto& r : trace)
    out += std::to_string(r.step) + "," + format_double(r.residual) + "," +
           format_double(r.damping) + "\n";
  return out;
}

int run_check(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem, to_overrides(opt));
  DomainPartition part = problem_partition(lp.spec);
  HypothesisReport rep = check_hypotheses(lp.spec, part, opt.samples, lp.seed);

  OutputDir out(opt.out);
  out.write("hypothesis_report.json",
            dump_json(to_json(rep, lp.spec, part, lp, opt.samples)));
  out.manifest("check", lp);
  print_checks(rep);
  return rep.pass ? 0 : 1;
}

int run_solve(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem, to_overrides(opt));
  const ProblemSpec& spec = lp.spec;
  DomainPartition part = problem_partition(spec);
  HypothesisReport checks = check_hypotheses(spec, part, opt.samples, lp.seed);

  OutputDir out(opt.out);
  out.write("hypothesis_report.json",
            dump_json(to_json(checks, spec, part, lp, opt.samples)));
  print_checks(checks);
  if (!checks.pass && !opt.force) {
    out.manifest("solve", lp);
    std::printf("hypothesis checks failed; pass --force to solve anyway\n");
    return 1;
  }

  SolverConfig cfg;
  cfg.tolerance = opt.tolerance;
  cfg.max_steps = opt.max_steps;
  SolveReport rep = spec.kind == ProblemKind::reduced ? solve_reduced(spec, cfg)
                                                      : solve_main(spec, cfg);

  std::vector<std::pair<std::string, const Vec*>> cols;
  cols.emplace_back("u", &rep.u.values());
  cols.emplace_back("w", &rep.w.values());
  if (rep.v) cols.emplace_back("v", &rep.v->values());
  std::string sol_path = (out.dir / "solution.csv").string();
  write_nodal_csv(sol_path, spec.grid, cols);
  out.track(sol_path);

  out.write("trace.csv", trace_csv(rep.trace));

  Json j;
  j["status"] = rep.status;
  j["used_fallback"] = rep.used_fallback;
  j["iterations"] = rep.iterations;
  j["final_residual"] = rep.final_residual;
  j["weak_residual_max"] = rep.weak.max_abs;
  j["weak_residual_scale"] = rep.weak.scale;
  j["memberships"] = to_json(rep.memberships);
  j["problem"] = lp.name;
  j["kind"] = spec.kind == ProblemKind::reduced ? "constant" : "variable";
  if (spec.manufactured) {
    GridFunction w_star = phi0(spec.manufactured->u_star, spec.p);
    double eu =
        (rep.u.values() - spec.manufactured->u_star.values()).abs().maxCoeff();
    double ew = (rep.w.values() - w_star.values()).abs().maxCoeff();
    j["manufactured_error"] = Json{{"u", eu}, {"w", ew}};
  }
  out.write("report.json", dump_json(j));
  out.manifest("solve", lp);

  std::printf("status: %s after %d steps, residual %s\n", rep.status.c_str(),
              rep.iterations, format_double(rep.final_residual).c_str());
  std::printf("weak residual max %s (scale %s)\n",
              format_double(rep.weak.max_abs).c_str(),
              format_double(rep.weak.scale).c_str());
  return rep.solved() ? 0 : 1;
}

int run_norms(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem, to_overrides(opt));
  const ProblemSpec& spec = lp.spec;
  if (!lp.norm_candidate)
    throw config_error("norms command needs a [norms] u entry");
  const GridFunction& u = *lp.norm_candidate;

  Json entries = Json::array();
  auto scalar_entry = [&](const std::string& kind, const std::string& field,
                          double value) {
    entries.push_back(Json{
        {"norm_kind", kind}, {"exponent_field_id", field}, {"value", value}});
    std::printf("%-22s %-8s %s\n", kind.c_str(), field.c_str(),
                format_double(value).c_str());
  };
  auto pn_entry = [&](PnIndex idx, double value) {
    entries.push_back(Json{
        {"norm_kind", "pn_seminorm"},
        {"pn_index", Json{{"alpha", idx.alpha}, {"beta", idx.beta}}},
        {"value", value}});
    std::printf("%-22s (%s, %s) %s\n", "pn_seminorm",
                format_double(idx.alpha).c_str(), format_double(idx.beta).c_str(),
                format_double(value).c_str());
  };

  scalar_entry("modular", "p", modular(u, spec.p));
  scalar_entry("luxemburg", "p", luxemburg_norm(u, spec.p));
  scalar_entry("sobolev", "p", sobolev_norm(u, spec.p));
  scalar_entry("luxemburg", "growth", luxemburg_norm(u, spec.growth));

  double pc = spec.p_const;
  double qc = pc / (pc - 1.0);
  pn_entry(PnIndex{(pc - 2.0) * qc, qc},
           pn_seminorm(u, PnIndex{(pc - 2.0) * qc, qc}));
  if (pc != 2.0)
    pn_entry(PnIndex{pc - 2.0, 2.0}, pn_seminorm(u, PnIndex{pc - 2.0, 2.0}));

  MembershipReport mem = membership_report(u, spec);
  for (const auto& e : mem.entries) scalar_entry("membership", e.quantity, e.value);

  Json j;
  j["problem"] = lp.name;
  j["entries"] = entries;
  if (mem.log_moment_applicable)
    j["log_moment"] = Json{{"lhs", mem.log_moment_lhs},
                           {"bound", mem.log_moment_bound},
                           {"ok", mem.log_moment_ok}};

  OutputDir out(opt.out);
  out.write("norms.json", dump_json(j));
  out.manifest("norms", lp);
  return 0;
}

int run_transform(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem, to_overrides(opt));
  if (lp.spec.kind != ProblemKind::variable)
    throw config_error("transform expects a variable-exponent problem");

  DomainPartition part = problem_partition(lp.spec);
  ReduceResult red = reduce_problem(lp.spec, part);

  OutputDir out(opt.out);
  std::string reduced_path = (out.dir / (lp.name + "_reduced.toml")).string();
  for (const auto& f : write_reduced_problem(reduced_path, red)) out.track(f);

  Json j;
  j["problem"] = lp.name;
  j["reduced_problem"] = fs::path(reduced_path).filename().string();
  j["p1"] = red.reduced.p_const;
  j["q1"] = red.derived.q1;
  j["ptilde1"] = red.derived.ptilde1;
  j["leading_factor"] = red.reduced.leading_factor;
  j["eta"] = red.reduced.eta;
  j["gap_region1_min"] = red.gap_region1_min;
  j["gap_region2_max"] = red.gap_region2_max;
  j["theta"] = Json{{"min", red.reduced.growth.values().minCoeff()},
                    {"max", red.reduced.growth.values().maxCoeff()}};
  j["gamma"] = Json{{"min", red.derived.gamma.values().minCoeff()},
                    {"max", red.derived.gamma.values().maxCoeff()}};
  out.write("transform_report.json", dump_json(j));
  out.manifest("transform", lp);

  std::printf("reduced problem written to %s\n", reduced_path.c_str());
  std::printf("theta gap: region1 min %s, region2 max %s\n",
              format_double(red.gap_region1_min).c_str(),
              format_double(red.gap_region2_max).c_str());
  return 0;
}

int run_study(const Options& opt) {
  LoadedProblem lp = load_problem(opt.problem, to_overrides(opt));
  if (opt.grids.size() < 2)
    throw config_error("study needs --grid with at least two node counts");
  if (!lp.resamplable)
    throw config_error("problem fields come from csv tables; cannot resample");

  SolverConfig cfg;
  cfg.tolerance = opt.tolerance;
  cfg.max_steps = opt.max_steps;
  StudyReport rep = refinement_study(lp.resample, opt.grids, cfg);

  std::string csv = "nodes,h,iterations,err_u,err_w,order_u,order_w\n";
  Json rows = Json::array();
  std::printf("%8s %12s %6s %14s %14s %8s %8s\n", "nodes", "h", "steps", "err_u",
              "err_w", "ord_u", "ord_w");
  for (const auto& r : rep.rows) {
    csv += std::to_string(r.nodes) + "," + format_double(r.h) + "," +
           std::to_string(r.iterations) + "," + format_double(r.err_u) + "," +
           format_double(r.err_w) + "," + format_double(r.order_u) + "," +
           format_double(r.order_w) + "\n";
    rows.push_back(Json{{"nodes", r.nodes},
                        {"h", r.h},
                        {"iterations", r.iterations},
                        {"err_u", r.err_u},
                        {"err_w", r.err_w},
                        {"order_u", r.order_u},
                        {"order_w", r.order_w}});
    std::printf("%8d %12.5g %6d %14.6g %14.6g %8.3f %8.3f\n", r.nodes, r.h,
                r.iterations, r.err_u, r.err_w, r.order_u, r.order_w);
  }
  Json j;
  j["problem"] = lp.name;
  j["rows"] = rows;
  j["monotone_w"] = rep.monotone_w;

  OutputDir out(opt.out);
  out.write("study.csv", csv);
  out.write("study.json", dump_json(j));
  out.manifest("study", lp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-exponent Lebesgue/Sobolev toolkit"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", opt.problem, "problem file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--eta", opt.eta, "partition margin override");
    sub->add_option("--p1", opt.p1, "reference exponent override");
    sub->add_option("--analysis-dim", opt.analysis_dim,
                    "analysis dimension override");
    sub->add_option("--seed", opt.seed, "sampling seed override");
    sub->add_option("--samples", opt.samples, "condition-check samples");
  };

  CLI::App* check = app.add_subcommand("check", "verify problem hypotheses");
  add_common(check);
  CLI::App* solve = app.add_subcommand("solve", "solve the problem");
  add_common(solve);
  solve->add_flag("--force", opt.force, "solve even if checks fail");
  solve->add_option("--tolerance", opt.tolerance, "nonlinear residual tolerance");
  solve->add_option("--max-steps", opt.max_steps, "Newton step cap");
  CLI::App* norms = app.add_subcommand("norms", "norm table for [norms] u");
  add_common(norms);
  CLI::App* transform =
      app.add_subcommand("transform", "emit the constant-exponent rewrite");
  add_common(transform);
  CLI::App* study = app.add_subcommand("study", "grid refinement study");
  add_common(study);
  study->add_option("--grid", opt.grids, "node counts")->delimiter(',');
  study->add_option("--tolerance", opt.tolerance, "nonlinear residual tolerance");
  study->add_option("--max-steps", opt.max_steps, "Newton step cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(opt);
    if (solve->parsed()) return run_solve(opt);
    if (norms->parsed()) return run_norms(opt);
    if (transform->parsed()) return run_transform(opt);
    if (study->parsed()) return run_study(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
