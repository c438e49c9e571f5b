#include "vex/config.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "vex/io.hpp"
#include "vex/solver.hpp"

namespace vex {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail_line(int lineno, const std::string& why) {
  throw config_error("config line " + std::to_string(lineno) + ": " + why);
}

bool parse_number(const std::string& s, double& out) {
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

ConfigValue parse_value(const std::string& raw, int lineno) {
  ConfigValue v;
  if (raw == "true" || raw == "false") {
    v.kind = ConfigValue::Kind::boolean;
    v.flag = raw == "true";
    return v;
  }
  if (!raw.empty() && raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      fail_line(lineno, "unterminated string");
    v.kind = ConfigValue::Kind::string;
    v.str = raw.substr(1, raw.size() - 2);
    if (v.str.find('"') != std::string::npos)
      fail_line(lineno, "embedded quotes are not supported");
    return v;
  }
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') fail_line(lineno, "unterminated array");
    v.kind = ConfigValue::Kind::array;
    std::string body = trim(raw.substr(1, raw.size() - 2));
    if (body.empty()) return v;
    std::istringstream in(body);
    std::string cell;
    while (std::getline(in, cell, ',')) {
      double d;
      if (!parse_number(trim(cell), d))
        fail_line(lineno, "array entries must be numbers");
      v.arr.push_back(d);
    }
    return v;
  }
  if (parse_number(raw, v.num)) {
    v.kind = ConfigValue::Kind::number;
    return v;
  }
  fail_line(lineno, "expected a number, string, bool or array");
}

}  // namespace

ConfigTable parse_config(const std::string& text) {
  ConfigTable table;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line(lineno, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail_line(lineno, "empty section name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail_line(lineno, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail_line(lineno, "empty key");
    if (table[section].count(key))
      fail_line(lineno, "duplicate key '" + key + "' in [" + section + "]");
    table[section][key] = parse_value(trim(s.substr(eq + 1)), lineno);
  }
  return table;
}

namespace {

std::string dir_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

std::string stem_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

int as_int(double d, const std::string& what) {
  if (d != std::floor(d)) throw config_error(what + " must be an integer");
  return int(d);
}

struct ProblemBuilder {
  ConfigTable table;
  std::string dir;
  std::string default_name;
  Overrides ov;
  mutable bool used_csv = false;

  const ConfigValue* find(const std::string& sec, const std::string& key) const {
    auto s = table.find(sec);
    if (s == table.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double require_number(const std::string& sec, const std::string& key) const {
    const ConfigValue* v = find(sec, key);
    if (!v) throw config_error("missing [" + sec + "] " + key);
    if (v->kind != ConfigValue::Kind::number)
      throw config_error("[" + sec + "] " + key + " must be a number");
    return v->num;
  }

  std::optional<double> opt_number(const std::string& sec,
                                   const std::string& key) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return std::nullopt;
    if (v->kind != ConfigValue::Kind::number)
      throw config_error("[" + sec + "] " + key + " must be a number");
    return v->num;
  }

  std::optional<std::string> opt_string(const std::string& sec,
                                        const std::string& key) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return std::nullopt;
    if (v->kind != ConfigValue::Kind::string)
      throw config_error("[" + sec + "] " + key + " must be a string");
    return v->str;
  }

  Grid make_grid(std::optional<int> nodes_override) const {
    const ConfigValue* nodes = find("grid", "nodes");
    if (!nodes || nodes->kind != ConfigValue::Kind::array || nodes->arr.empty() ||
        nodes->arr.size() > 2)
      throw config_error("[grid] nodes must be an array of one or two counts");
    int dim = int(nodes->arr.size());

    auto extent = [&](const char* key) -> std::array<double, 2> {
      const ConfigValue* v = find("grid", key);
      if (!v) return {0.0, 1.0};
      if (v->kind != ConfigValue::Kind::array || v->arr.size() != 2)
        throw config_error(std::string("[grid] ") + key + " must be [lo, hi]");
      return {v->arr[0], v->arr[1]};
    };

    int adim = 3;
    if (auto v = opt_number("grid", "analysis_dimension"))
      adim = as_int(*v, "[grid] analysis_dimension");
    if (ov.analysis_dim) adim = *ov.analysis_dim;

    auto count = [&](int axis) {
      int n = as_int(nodes->arr[size_t(axis)], "[grid] nodes");
      return nodes_override ? *nodes_override : n;
    };

    auto ex = extent("x");
    if (dim == 1) return Grid(ex[0], ex[1], count(0), adim);
    auto ey = extent("y");
    return Grid({ex[0], ey[0]}, {ex[1], ey[1]}, {count(0), count(1)}, adim);
  }

  Vec field(const Grid& g, const ConfigValue& v, const std::string& what) const {
    if (v.kind == ConfigValue::Kind::number)
      return Vec::Constant(g.size(), v.num);
    if (v.kind != ConfigValue::Kind::string)
      throw config_error(what + " must be a number, expression or csv reference");
    if (v.str.rfind("csv:", 0) == 0) {
      used_csv = true;
      return read_csv_column(dir + "/" + v.str.substr(4), g, "value");
    }
    ExprPtr e = parse_expression(v.str);
    std::vector<std::string> free_names;
    e->collect_fields(free_names);
    if (!free_names.empty())
      throw config_error(what + ": field expressions may use x, y, pi only (saw '" +
                         free_names.front() + "')");
    Vec out(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      EvalEnv env;
      env.x = g.coord(k, 0);
      env.y = g.dim() == 2 ? g.coord(k, 1) : 0.0;
      out[k] = e->eval(env);
    }
    return out;
  }

  std::optional<Vec> opt_field(const Grid& g, const std::string& sec,
                               const std::string& key) const {
    const ConfigValue* v = find(sec, key);
    if (!v) return std::nullopt;
    return field(g, *v, "[" + sec + "] " + key);
  }

  ProblemSpec build(std::optional<int> nodes_override) const {
    if (nodes_override && used_csv)
      throw config_error("problem fields come from csv tables; cannot rebuild "
                         "on a different grid");

    std::string kind_str = opt_string("problem", "kind").value_or("constant");
    bool variable;
    if (kind_str == "constant")
      variable = false;
    else if (kind_str == "variable")
      variable = true;
    else
      throw config_error("[problem] kind must be \"constant\" or \"variable\"");

    Grid g = make_grid(nodes_override);

    const ConfigValue* growth_v = find("exponents", "growth");
    if (!growth_v) throw config_error("missing [exponents] growth");
    ExponentField growth(g, field(g, *growth_v, "[exponents] growth"));

    double p_const;
    Vec p_values;
    if (variable) {
      const ConfigValue* pv = find("exponents", "p");
      if (!pv) throw config_error("missing [exponents] p for the variable kind");
      p_values = field(g, *pv, "[exponents] p");
      double pmin = p_values.minCoeff();
      p_const = ov.p1 ? *ov.p1 : opt_number("exponents", "p1").value_or(pmin);
      if (!(p_const >= 2.0))
        throw config_error("reference exponent p1 must be at least 2");
      if (p_const > pmin + 1e-12)
        throw config_error("reference exponent p1 exceeds min p(x)");
      p_const = std::min(p_const, pmin);
    } else {
      p_const = require_number("exponents", "p0");
      if (!(p_const >= 2.0))
        throw config_error("leading exponent p0 must be at least 2");
      if (find("exponents", "p"))
        throw config_error("constant kind takes p0, not a p field");
      p_values = Vec::Constant(g.size(), p_const);
    }

    ProblemSpec spec(g, ExponentField(g, std::move(p_values)), std::move(growth));
    spec.kind = variable ? ProblemKind::variable : ProblemKind::reduced;
    spec.name = opt_string("problem", "name").value_or(default_name);
    spec.p_const = p_const;

    spec.leading_factor = opt_number("exponents", "leading_factor").value_or(1.0);
    if (!(spec.leading_factor > 0.0))
      throw config_error("[exponents] leading_factor must be positive");

    if (auto sg = opt_field(g, "exponents", "sign_growth"))
      spec.sign_growth = ExponentField(g, std::move(*sg));

    spec.eta = ov.eta ? *ov.eta : opt_number("partition", "eta").value_or(0.05);
    if (!(spec.eta > 0.0 && spec.eta < 1.0))
      throw config_error("partition eta must lie in (0, 1)");

    // Nonlinearity and its coefficient fields.
    spec.c.expr = parse_expression(opt_string("nonlinearity", "c").value_or("0"));
    spec.floor = opt_number("nonlinearity", "floor").value_or(0.0);
    if (spec.floor < 0.0) throw config_error("[nonlinearity] floor must be >= 0");

    for (int i = 0; i <= 5; ++i) {
      std::string ckey = "c" + std::to_string(i);
      std::string akey = "a" + std::to_string(i);
      const ConfigValue* cv = find("nonlinearity", ckey);
      const ConfigValue* av = find("nonlinearity", akey);
      if (cv && av)
        throw config_error("[nonlinearity] give " + ckey + " or " + akey +
                           ", not both");
      if (const ConfigValue* v = cv ? cv : av) {
        Vec vals = field(g, *v, "[nonlinearity] " + (cv ? ckey : akey));
        if ((vals < 0.0).any())
          throw config_error("[nonlinearity] " + (cv ? ckey : akey) +
                             " must be nonnegative");
        spec.coeff[ckey] = std::move(vals);
      }
    }

    if (auto s = table.find("bindings"); s != table.end())
      for (const auto& [name, v] : s->second)
        spec.c.bindings[name] = field(g, v, "[bindings] " + name);

    // Names referenced by the expression but not bound explicitly resolve
    // to the declared fields of the problem.
    std::vector<std::string> names;
    spec.c.expr->collect_fields(names);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const auto& name : names) {
      if (spec.c.bindings.count(name)) continue;
      if (name == "p")
        spec.c.bindings[name] = spec.p.values();
      else if (name == "growth")
        spec.c.bindings[name] = spec.growth.values();
      else if (name == "sign_growth") {
        if (!spec.sign_growth)
          throw config_error("nonlinearity references sign_growth, which is "
                             "not declared");
        spec.c.bindings[name] = spec.sign_growth->values();
      } else if (name.size() == 2 && name[0] == 'c' && name[1] >= '0' &&
                 name[1] <= '5') {
        spec.c.bindings[name] = spec.coefficient(name);
      } else {
        throw config_error("nonlinearity references unknown field '" + name + "'");
      }
    }

    if (auto h = opt_field(g, "source", "h"))
      spec.source = GridFunction(g, std::move(*h));

    if (auto us = opt_field(g, "manufactured", "u_star")) {
      bool zero_trace = true;
      for (Eigen::Index k = 0; k < g.size() && zero_trace; ++k)
        if (g.on_boundary(k) && (*us)[k] != 0.0) zero_trace = false;
      GridFunction u_star(g, std::move(*us), zero_trace);
      std::string mode =
          opt_string("manufactured", "source").value_or("analytic");
      if (mode == "stencil") {
        if (spec.source)
          throw config_error("stencil mode generates the source; remove "
                             "[source]");
        spec.manufactured = ManufacturedSolution{u_star, true};
        spec.source = manufactured_source(spec, u_star);
      } else if (mode == "analytic") {
        spec.manufactured = ManufacturedSolution{std::move(u_star), false};
      } else {
        throw config_error(
            "[manufactured] source must be \"analytic\" or \"stencil\"");
      }
    }

    if (auto reg = opt_field(g, "partition", "regions")) {
      Mask r1 = Mask::Constant(g.size(), false);
      Mask r2 = r1, r3 = r1;
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        double v = (*reg)[k];
        if (v == 1.0)
          r1[k] = true;
        else if (v == 2.0)
          r2[k] = true;
        else if (v == 3.0)
          r3[k] = true;
        else
          throw config_error("[partition] regions must hold 1, 2 or 3");
      }
      spec.pinned_partition =
          DomainPartition{g, std::move(r1), std::move(r2), std::move(r3), spec.eta};
    }

    return spec;
  }
};

}  // namespace

LoadedProblem load_problem(const std::string& path, const Overrides& ov) {
  std::string text = read_text_file(path);
  auto builder = std::make_shared<ProblemBuilder>();
  builder->table = parse_config(text);
  builder->dir = dir_of(path);
  builder->default_name = stem_of(path);
  builder->ov = ov;

  LoadedProblem lp{builder->build(std::nullopt)};
  lp.name = lp.spec.name;
  lp.path = path;
  lp.content_hash = fnv1a64_hex(text);

  uint64_t seed = 0;
  if (auto v = builder->opt_number("problem", "seed")) {
    if (*v < 0 || *v != std::floor(*v))
      throw config_error("[problem] seed must be a nonnegative integer");
    seed = uint64_t(*v);
  }
  lp.seed = ov.seed ? *ov.seed : seed;

  if (auto u = builder->opt_field(lp.spec.grid, "norms", "u")) {
    const Grid& g = lp.spec.grid;
    bool zero_trace = true;
    for (Eigen::Index k = 0; k < g.size() && zero_trace; ++k)
      if (g.on_boundary(k) && (*u)[k] != 0.0) zero_trace = false;
    lp.norm_candidate = GridFunction(g, std::move(*u), zero_trace);
  }

  lp.resamplable = !builder->used_csv;
  lp.resample = [builder](int n) { return builder->build(n); };
  return lp;
}

namespace {

std::string toml_array(std::initializer_list<double> vals) {
  std::string out = "[";
  bool first = true;
  for (double v : vals) {
    if (!first) out += ", ";
    first = false;
    out += format_double(v);
  }
  return out + "]";
}

}  // namespace

std::vector<std::string> write_reduced_problem(const std::string& path,
                                               const ReduceResult& red) {
  const ProblemSpec& r = red.reduced;
  const Grid& g = r.grid;
  std::string base = path;
  if (base.size() > 5 && base.substr(base.size() - 5) == ".toml")
    base = base.substr(0, base.size() - 5);
  std::string stem = stem_of(path);

  std::vector<std::string> written;
  auto sidecar = [&](const std::string& tag, const Vec& values) {
    std::string file = base + "." + tag + ".csv";
    write_nodal_csv(file, g, {{"value", &values}});
    written.push_back(file);
    return "csv:" + stem + "." + tag + ".csv";
  };

  std::string out;
  out += "[problem]\n";
  out += "kind = \"constant\"\n";
  out += "name = \"" + r.name + "\"\n\n";

  out += "[grid]\n";
  out += "x = " + toml_array({g.lo(0), g.hi(0)}) + "\n";
  if (g.dim() == 2) out += "y = " + toml_array({g.lo(1), g.hi(1)}) + "\n";
  out += "nodes = [" + std::to_string(g.nodes(0));
  if (g.dim() == 2) out += ", " + std::to_string(g.nodes(1));
  out += "]\n";
  out += "analysis_dimension = " + std::to_string(g.analysis_dim()) + "\n\n";

  out += "[exponents]\n";
  out += "p0 = " + format_double(r.p_const) + "\n";
  out += "leading_factor = " + format_double(r.leading_factor) + "\n";
  out += "growth = \"" + sidecar("growth", r.growth.values()) + "\"\n";
  if (r.sign_growth)
    out += "sign_growth = \"" + sidecar("sign_growth", r.sign_growth->values()) +
           "\"\n";
  out += "\n[nonlinearity]\n";
  out += "c = \"" + r.c.expr->to_string() + "\"\n";
  out += "floor = " + format_double(r.floor) + "\n";
  for (const auto& [key, values] : r.coeff)
    out += key + " = \"" + sidecar(key, values) + "\"\n";

  if (!r.c.bindings.empty()) {
    out += "\n[bindings]\n";
    for (const auto& [name, values] : r.c.bindings)
      out += name + " = \"" + sidecar("binding." + name, values) + "\"\n";
  }

  if (r.source) {
    out += "\n[source]\n";
    out += "h = \"" + sidecar("h", r.source->values()) + "\"\n";
  }

  if (r.manufactured) {
    out += "\n[manufactured]\n";
    out += "u_star = \"" + sidecar("u_star", r.manufactured->u_star.values()) +
           "\"\n";
    out += "source = \"analytic\"\n";  // already materialized above
  }

  out += "\n[partition]\n";
  out += "eta = " + format_double(r.eta) + "\n";
  if (r.pinned_partition) {
    Vec regions(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      regions[k] = r.pinned_partition->region1[k]   ? 1.0
                   : r.pinned_partition->region2[k] ? 2.0
                                                    : 3.0;
    out += "regions = \"" + sidecar("regions", regions) + "\"\n";
  }

  write_text_file(path, out);
  written.push_back(path);
  return written;
}

}  // namespace vex
