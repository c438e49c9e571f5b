#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "vex/config.hpp"
#include "vex/io.hpp"

using namespace vex;

namespace {

struct TempDir {
  std::filesystem::path root;

  TempDir() {
    static int counter = 0;
    root = std::filesystem::temp_directory_path() /
           ("vex-cfg-" + std::to_string(++counter) + "-" +
            std::to_string(std::random_device{}()));
    std::filesystem::create_directories(root);
  }
  ~TempDir() { std::filesystem::remove_all(root); }

  std::string file(const std::string& name, const std::string& content) const {
    std::string p = (root / name).string();
    write_text_file(p, content);
    return p;
  }
};

const char* kBaseConstant = R"cfg([problem]
kind = "constant"
name = "demo"
seed = 7

[grid]
x = [0, 1]
nodes = [33]
analysis_dimension = 3

[exponents]
p0 = 3
growth = 2

[nonlinearity]
c = "c0 * u"
c0 = "1 + x"

[source]
h = "sin(pi*x)"
)cfg";

}  // namespace

TEST_CASE("config parser handles sections, comments, and value kinds") {
  std::string text =
      "top = 1\r\n"
      "# full-line comment\n"
      "[problem]\n"
      "name = \"demo # not a comment\" # trailing\n"
      "flag = true\n"
      "off = false\n"
      "nums = [1, 2.5, -3e2]\n"
      "empty = []\n"
      "\n"
      "[grid]\n"
      "x = [0, 1]\n";
  ConfigTable t = parse_config(text);
  CHECK(t[""]["top"].num == 1.0);
  CHECK(t["problem"]["name"].kind == ConfigValue::Kind::string);
  CHECK(t["problem"]["name"].str == "demo # not a comment");
  CHECK(t["problem"]["flag"].flag);
  CHECK(!t["problem"]["off"].flag);
  REQUIRE(t["problem"]["nums"].arr.size() == 3);
  CHECK(t["problem"]["nums"].arr[1] == 2.5);
  CHECK(t["problem"]["nums"].arr[2] == -300.0);
  CHECK(t["problem"]["empty"].arr.empty());
  CHECK(t["grid"]["x"].arr.size() == 2);
}

TEST_CASE("config parser reports errors with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config("[s]\na = 1\na = 2\n"),
                       "config line 3: duplicate key 'a' in [s]", config_error);
  CHECK_THROWS_WITH_AS(parse_config("a = \"oops\n"),
                       "config line 1: unterminated string", config_error);
  CHECK_THROWS_WITH_AS(parse_config("[s\n"),
                       "config line 1: unterminated section header",
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("[]\n"), "config line 1: empty section name",
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("a = [1, x]\n"),
                       "config line 1: array entries must be numbers",
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("a = [1, 2\n"),
                       "config line 1: unterminated array", config_error);
  CHECK_THROWS_WITH_AS(parse_config("justtext\n"),
                       "config line 1: expected key = value", config_error);
  CHECK_THROWS_WITH_AS(parse_config("= 3\n"), "config line 1: empty key",
                       config_error);
  CHECK_THROWS_AS(parse_config("a = 1 2\n"), config_error);
  CHECK_THROWS_AS(parse_config("a = \"x\"y\"\n"), config_error);
}

TEST_CASE("float formatting survives a parse round trip") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.5) == "-2.5");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 500; ++i) {
    double v = mant(rng) * std::pow(10.0, expo(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("json dump is deterministic and keeps non-finite values") {
  Json obj;
  obj["b"] = 0.1;
  obj["a"] = 3;
  obj["list"] = Json::array({1.5, 2.0});
  std::string s = dump_json(obj);
  // Keys come out in map order regardless of insertion order.
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(dump_json(obj) == s);

  Json special;
  special["pos"] = std::numeric_limits<double>::infinity();
  special["neg"] = -std::numeric_limits<double>::infinity();
  special["bad"] = std::numeric_limits<double>::quiet_NaN();
  std::string t = dump_json(special);
  CHECK(t.find("\"inf\"") != std::string::npos);
  CHECK(t.find("\"-inf\"") != std::string::npos);
  CHECK(t.find("\"nan\"") != std::string::npos);

  // Serialized documents end with a newline.
  CHECK(dump_json(Json::object()) == "{}\n");
  CHECK(dump_json(Json::array()) == "[]\n");
}

TEST_CASE("content hashing matches the reference fnv-1a vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("nodal csv tables round-trip bitwise") {
  TempDir tmp;
  Grid g({0.0, 0.0}, {1.0, 2.0}, {5, 7}, 2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  Vec a(g.size()), b(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    a[k] = dist(rng);
    b[k] = dist(rng);
  }
  std::string p = (tmp.root / "t.csv").string();
  write_nodal_csv(p, g, {{"first", &a}, {"second", &b}});

  Vec ra = read_csv_column(p, g, "first");
  Vec rb = read_csv_column(p, g, "second");
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    CHECK(ra[k] == a[k]);
    CHECK(rb[k] == b[k]);
  }

  CHECK_THROWS_AS(read_csv_column(p, g, "third"), config_error);
  Grid other({0.0, 0.0}, {2.0, 2.0}, {5, 7}, 2);
  CHECK_THROWS_AS(read_csv_column(p, other, "first"), config_error);
  Grid fewer({0.0, 0.0}, {1.0, 2.0}, {5, 9}, 2);
  CHECK_THROWS_AS(read_csv_column(p, fewer, "first"), config_error);
}

TEST_CASE("grid function csv keeps the zero-trace flag choice") {
  TempDir tmp;
  Grid g(0.0, 1.0, 17, 2);
  Vec v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double x = g.coord(k, 0);
    v[k] = x * (1.0 - x);
  }
  GridFunction u(g, v, true);
  std::string p = (tmp.root / "u.csv").string();
  write_grid_function_csv(p, u);
  GridFunction back = read_grid_function_csv(p, g, true);
  CHECK(back.dirichlet_zero());
  for (Eigen::Index k = 0; k < g.size(); ++k) CHECK(back.values()[k] == v[k]);
}

TEST_CASE("problem files load with names, seeds, and bound coefficients") {
  TempDir tmp;
  LoadedProblem lp = load_problem(tmp.file("demo.toml", kBaseConstant));
  CHECK(lp.name == "demo");
  CHECK(lp.seed == 7);
  CHECK(lp.content_hash == fnv1a64_hex(kBaseConstant));
  CHECK(lp.spec.kind == ProblemKind::reduced);
  CHECK(lp.spec.p_const == 3.0);
  CHECK(lp.spec.leading_factor == 1.0);
  CHECK(lp.spec.grid.nodes(0) == 33);
  CHECK(lp.spec.grid.analysis_dim() == 3);
  REQUIRE(lp.spec.source.has_value());

  // c = "c0 * u" resolves c0 against the declared coefficient field.
  const Grid& g = lp.spec.grid;
  double x5 = g.coord(5, 0);
  CHECK(lp.spec.c.eval(g, 5, 2.0) == doctest::Approx((1.0 + x5) * 2.0));

  // Default name falls back to the file stem.
  std::string anon(kBaseConstant);
  anon.erase(anon.find("name = \"demo\"\n"), 14);
  LoadedProblem lp2 = load_problem(tmp.file("fallback.toml", anon));
  CHECK(lp2.name == "fallback");
}

TEST_CASE("command-line overrides replace file values") {
  TempDir tmp;
  std::string p = tmp.file("demo.toml", kBaseConstant);
  Overrides ov;
  ov.seed = 99;
  ov.analysis_dim = 4;
  ov.eta = 0.2;
  LoadedProblem lp = load_problem(p, ov);
  CHECK(lp.seed == 99);
  CHECK(lp.spec.grid.analysis_dim() == 4);
  CHECK(lp.spec.eta == 0.2);
}

TEST_CASE("expression fields may use coordinates only") {
  TempDir tmp;
  std::string bad(kBaseConstant);
  bad.replace(bad.find("c0 = \"1 + x\""), 12, "c0 = \"1 + q\"");
  CHECK_THROWS_AS(load_problem(tmp.file("b.toml", bad)), config_error);

  // The solution argument is reserved for the nonlinearity.
  std::string with_u(kBaseConstant);
  with_u.replace(with_u.find("c0 = \"1 + x\""), 12, "c0 = \"1 + u\"");
  CHECK_THROWS_AS(load_problem(tmp.file("bu.toml", with_u)), domain_error);
}

TEST_CASE("nonlinearity bindings are validated") {
  TempDir tmp;
  auto swap_c = [&](const std::string& expr) {
    std::string text(kBaseConstant);
    text.replace(text.find("c = \"c0 * u\""), 12, "c = \"" + expr + "\"");
    return tmp.file("c.toml", text);
  };
  CHECK_THROWS_AS(load_problem(swap_c("q * u")), config_error);
  CHECK_THROWS_AS(load_problem(swap_c("sign_growth * u")), config_error);

  // growth auto-binds; an explicit [bindings] entry also works.
  LoadedProblem ok = load_problem(swap_c("sgnpow(u, growth - 1)"));
  CHECK(ok.spec.c.bindings.count("growth") == 1);

  std::string bound(kBaseConstant);
  bound.replace(bound.find("c = \"c0 * u\""), 12, "c = \"w * u\"");
  bound += "\n[bindings]\nw = \"2 + x\"\n";
  LoadedProblem lp = load_problem(tmp.file("w.toml", bound));
  CHECK(lp.spec.c.bindings.count("w") == 1);
  CHECK(lp.spec.c.eval(lp.spec.grid, 0, 3.0) == doctest::Approx(6.0));
}

TEST_CASE("coefficient aliases and sign constraints") {
  TempDir tmp;
  std::string alias(kBaseConstant);
  alias.replace(alias.find("c0 = \"1 + x\""), 12, "a0 = \"1 + x\"");
  LoadedProblem lp = load_problem(tmp.file("a.toml", alias));
  CHECK(lp.spec.coeff.count("c0") == 1);  // canonical key

  std::string both(kBaseConstant);
  both.replace(both.find("c0 = \"1 + x\""), 12, "c0 = 1\na0 = 1");
  CHECK_THROWS_AS(load_problem(tmp.file("both.toml", both)), config_error);

  std::string neg(kBaseConstant);
  neg.replace(neg.find("c0 = \"1 + x\""), 12, "c0 = \"x - 2\"");
  CHECK_THROWS_AS(load_problem(tmp.file("neg.toml", neg)), config_error);

  std::string floor(kBaseConstant);
  floor.replace(floor.find("[source]"), 8, "floor = -1\n[source]");
  CHECK_THROWS_AS(load_problem(tmp.file("fl.toml", floor)), config_error);
}

TEST_CASE("exponent declarations are checked per kind") {
  TempDir tmp;
  auto expect_throw = [&](std::string text, const std::string& from,
                          const std::string& to) {
    if (!from.empty()) text.replace(text.find(from), from.size(), to);
    CHECK_THROWS_AS(load_problem(tmp.file("e.toml", text)), config_error);
  };
  expect_throw(kBaseConstant, "p0 = 3", "p0 = 1.5");
  expect_throw(kBaseConstant, "p0 = 3", "p = \"2 + x\"");  // wrong kind
  expect_throw(kBaseConstant, "kind = \"constant\"", "kind = \"weird\"");
  expect_throw(kBaseConstant, "growth = 2", "other = 1");  // growth missing

  std::string variable(kBaseConstant);
  variable.replace(variable.find("kind = \"constant\""), 17,
                   "kind = \"variable\"");
  expect_throw(variable, "p0 = 3", "p1 = 2");  // p field missing
  expect_throw(variable, "p0 = 3", "p = \"2 + x\"\np1 = 1.5");
  expect_throw(variable, "p0 = 3", "p = \"2 + x\"\np1 = 2.5");  // above min p

  std::string ok(variable);
  ok.replace(ok.find("p0 = 3"), 6, "p = \"2 + x\"\np1 = 2");
  LoadedProblem lp = load_problem(tmp.file("v.toml", ok));
  CHECK(lp.spec.kind == ProblemKind::variable);
  CHECK(lp.spec.p_const == 2.0);
}

TEST_CASE("manufactured blocks generate or validate the source") {
  TempDir tmp;
  std::string stencil(kBaseConstant);
  stencil.replace(stencil.find("[source]\nh = \"sin(pi*x)\"\n"), 25,
                  "[manufactured]\nu_star = \"x*(1-x)\"\nsource = \"stencil\"\n");
  LoadedProblem lp = load_problem(tmp.file("m.toml", stencil));
  REQUIRE(lp.spec.manufactured.has_value());
  CHECK(lp.spec.manufactured->stencil_source);
  CHECK(lp.spec.manufactured->u_star.dirichlet_zero());
  REQUIRE(lp.spec.source.has_value());  // generated

  // Stencil mode refuses an explicit [source].
  std::string conflict(kBaseConstant);
  conflict += "\n[manufactured]\nu_star = \"x*(1-x)\"\nsource = \"stencil\"\n";
  CHECK_THROWS_AS(load_problem(tmp.file("mc.toml", conflict)), config_error);

  // Analytic mode keeps the declared source and detects the trace.
  std::string analytic(kBaseConstant);
  analytic += "\n[manufactured]\nu_star = \"x\"\nsource = \"analytic\"\n";
  LoadedProblem lp2 = load_problem(tmp.file("ma.toml", analytic));
  CHECK(!lp2.spec.manufactured->stencil_source);
  CHECK(!lp2.spec.manufactured->u_star.dirichlet_zero());  // u = 1 at x = 1

  std::string badmode(kBaseConstant);
  badmode += "\n[manufactured]\nu_star = \"x\"\nsource = \"weird\"\n";
  CHECK_THROWS_AS(load_problem(tmp.file("mb.toml", badmode)), config_error);
}

TEST_CASE("norm candidates and pinned partitions load") {
  TempDir tmp;
  std::string text(kBaseConstant);
  text += "\n[norms]\nu = \"x*(1-x)\"\n\n[partition]\nregions = 2\n";
  LoadedProblem lp = load_problem(tmp.file("n.toml", text));
  REQUIRE(lp.norm_candidate.has_value());
  CHECK(lp.norm_candidate->dirichlet_zero());
  REQUIRE(lp.spec.pinned_partition.has_value());
  CHECK(lp.spec.pinned_partition->count(2) == lp.spec.grid.size());
  CHECK(problem_partition(lp.spec).count(2) == lp.spec.grid.size());

  std::string bad(kBaseConstant);
  bad += "\n[partition]\nregions = 4\n";
  CHECK_THROWS_AS(load_problem(tmp.file("nb.toml", bad)), config_error);
}

TEST_CASE("csv-backed fields load but refuse resampling") {
  TempDir tmp;
  Grid g(0.0, 1.0, 33, 3);
  Vec growth(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    growth[k] = 2.0 + 0.5 * g.coord(k, 0);
  write_nodal_csv((tmp.root / "growth.csv").string(), g, {{"value", &growth}});

  std::string text(kBaseConstant);
  text.replace(text.find("growth = 2"), 10, "growth = \"csv:growth.csv\"");
  LoadedProblem lp = load_problem(tmp.file("csv.toml", text));
  CHECK(!lp.resamplable);
  for (Eigen::Index k = 0; k < g.size(); ++k)
    CHECK(lp.spec.growth.values()[k] == growth[k]);
  CHECK_THROWS_AS(lp.resample(65), config_error);

  // Expression-only problems rebuild on any grid.
  LoadedProblem plain = load_problem(tmp.file("plain.toml", kBaseConstant));
  CHECK(plain.resamplable);
  ProblemSpec fine = plain.resample(65);
  CHECK(fine.grid.nodes(0) == 65);
  CHECK(fine.p_const == 3.0);
}

TEST_CASE("grid blocks are validated") {
  TempDir tmp;
  auto expect_throw = [&](std::string text, const std::string& from,
                          const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    CHECK_THROWS_AS(load_problem(tmp.file("g.toml", text)), config_error);
  };
  expect_throw(kBaseConstant, "nodes = [33]", "nodes = [9, 9, 9]");
  expect_throw(kBaseConstant, "x = [0, 1]", "x = [0]");
  expect_throw(kBaseConstant, "seed = 7", "seed = -1");
  expect_throw(kBaseConstant, "seed = 7", "seed = 1.5");
  expect_throw(kBaseConstant, "analysis_dimension = 3",
               "analysis_dimension = 2.5");
}

TEST_CASE("reduced problems rewrite to loadable files") {
  TempDir tmp;
  std::string text = R"([problem]
kind = "variable"
name = "vdemo"

[grid]
x = [0, 1]
nodes = [33]
analysis_dimension = 3

[exponents]
p = "2 + x/2"
p1 = 2
growth = 2

[nonlinearity]
c = "u"
c0 = 1

[source]
h = "1"
)";
  LoadedProblem lp = load_problem(tmp.file("v.toml", text));
  DomainPartition part = problem_partition(lp.spec);
  ReduceResult red = reduce_problem(lp.spec, part);
  CHECK(red.reduced.kind == ProblemKind::reduced);
  CHECK(red.reduced.p_const == 2.0);
  CHECK(red.reduced.leading_factor == 1.0);  // p1 - 1

  std::string out = (tmp.root / "v_reduced.toml").string();
  std::vector<std::string> files = write_reduced_problem(out, red);
  REQUIRE(!files.empty());
  CHECK(files.back() == out);  // sidecar tables first, then the config
  for (const auto& f : files) CHECK(std::filesystem::exists(f));

  LoadedProblem back = load_problem(out);
  CHECK(back.spec.kind == ProblemKind::reduced);
  CHECK(back.spec.p_const == red.reduced.p_const);
  CHECK(back.spec.leading_factor == red.reduced.leading_factor);
  CHECK(!back.resamplable);  // nodal fields ride in csv tables

  // The emitted fields reproduce the in-memory reduction bitwise.
  const Vec& gv = red.reduced.growth.values();
  for (Eigen::Index k = 0; k < back.spec.grid.size(); ++k)
    CHECK(back.spec.growth.values()[k] == gv[k]);
  REQUIRE(back.spec.pinned_partition.has_value());
  for (int r = 1; r <= 3; ++r)
    CHECK(back.spec.pinned_partition->count(r) == part.count(r));
  REQUIRE(back.spec.source.has_value());
  for (Eigen::Index k = 0; k < back.spec.grid.size(); ++k)
    CHECK(back.spec.source->values()[k] ==
          red.reduced.source->values()[k]);
}
