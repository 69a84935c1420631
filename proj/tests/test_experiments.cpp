#include <catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hardylab/experiments/registry.hpp"

using namespace hardylab;
using namespace hardylab::experiments;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

ExperimentConfig small_vp(int samples = 300) {
  auto c = resolve_config("vp-bound");
  c.samples = samples;
  return c;
}

}  // namespace

TEST_CASE("registry lists exactly the checked claims", "[experiments]") {
  const std::set<std::string> expected{"mobius-invariance", "cayley-identities", "plaplacian-sign", "weak-form",
                                       "vp-bound",          "critical-hardy",    "improved-hardy",  "limit-p-to-N",
                                       "fp-properties",     "tm-scan",           "no-weight-rn",    "asym-counterexample",
                                       "bliss-limit",       "transplant-isometries"};
  std::set<std::string> names;
  for (const auto& e : registry()) {
    names.insert(e.name);
    CHECK(e.defaults().experiment == e.name);
    CHECK_FALSE(e.claim.empty());
    CHECK_FALSE(e.tolerance.empty());
  }
  CHECK(names == expected);
  CHECK(names.size() == registry().size());
  CHECK_THROWS_AS(find_experiment("hardy"), ConfigError);
}

TEST_CASE("configuration documents", "[experiments][config]") {
  auto c = resolve_config("vp-bound", parse_json_text(R"({"seed": 7, "params_grid": {"N": [4], "p": [3]},
                                                          "quadrature": {"rel_tol": 1e-6}})"));
  CHECK(c.seed == 7);
  CHECK(c.params_grid.at("N") == std::vector<double>{4});
  CHECK(c.quadrature.rel_tol == 1e-6);
  CHECK(c.spec().rel_tol == 1e-6);

  auto f = resolve_config("tm-scan", parse_json_text(R"({"family_grid": {"K": [1, 2]}})"));
  CHECK(f.family_grid.at("K") == std::vector<double>{1, 2});
  CHECK(f.family_grid.at("factor") == std::vector<double>{0.9, 1.1});

  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"sed": 7})")), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"quadrature": {"tol": 1}})")), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"quadrature": {"rel_tol": -1}})")), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"seed": -3})")), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"params_grid": {"N": "3"}})")), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text(R"({"experiment": "weak-form"})")), ConfigError);
  CHECK_THROWS_AS(parse_json_text("{not json"), ConfigError);
  CHECK_THROWS_AS(resolve_config("vp-bound", parse_json_text("[1, 2]")), ConfigError);
}

TEST_CASE("invalid grids are rejected", "[experiments][config]") {
  auto c = small_vp();
  c.params_grid = {{"N", {3, 4}}, {"p", {2, 2.5, 3}}};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.params_grid = {{"N", {}}, {"p", {2}}};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.params_grid = {{"N", {3.5}}, {"p", {2}}};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.params_grid = {{"N", {3}}, {"p", {0.5}}};
  CHECK_THROWS_AS(run_experiment(c), DomainError);
  c.params_grid = {{"N", {3}}, {"p", {3}}};
  CHECK_THROWS_AS(run_experiment(c), DomainError);
  c = small_vp();
  c.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  RunOptions bad;
  bad.tol_scale = 0.0;
  CHECK_THROWS_AS(run_experiment(small_vp(), bad), ConfigError);
}

TEST_CASE("number formatting", "[experiments][report]") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-1e-300) == "-1e-300");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-kInf) == "-inf");
}

TEST_CASE("rows, margins and exit status", "[experiments][report]") {
  const auto ok = make_row({{"N", 3.0}}, {{"x", 1.0}}, 0.5, 1.0, true, 1.0);
  CHECK(ok.margin == -0.5);
  CHECK(ok.passes());
  const auto loose = make_row({{"N", 3.0}}, {}, 1.5, 1.0, true, 2.0);
  CHECK(loose.passes());
  CHECK(as_number(loose.outputs.at("tolerance")) == 2.0);
  const auto nan = make_row({}, {}, std::numeric_limits<double>::quiet_NaN(), 1.0, true, 1.0);
  CHECK_FALSE(nan.passes());

  ExperimentReport r;
  r.experiment = "x";
  r.rows = {ok};
  r.summary = summarize(r.rows);
  CHECK(exit_status(r, false) == 0);
  r.rows.push_back(make_row({}, {}, 2.0, 1.0, true, 1.0));
  r.summary = summarize(r.rows);
  CHECK_FALSE(r.summary.pass);
  CHECK(r.summary.worst_violation == 2.0);
  CHECK(exit_status(r, false) == 1);
  r.rows.push_back(make_row({}, {}, 0.0, 1.0, false, 1.0));
  r.summary = summarize(r.rows);
  CHECK(r.summary.unconverged_rows == 1);
  CHECK(exit_status(r, false) == 2);
  CHECK(exit_status(r, true) == 1);
}

TEST_CASE("CSV layout", "[experiments][report]") {
  ExperimentReport r;
  r.experiment = "vp-bound";
  r.summary = summarize(r.rows);
  CHECK(to_csv(r) == "experiment,row_index,margin,converged\n");

  r.rows = {make_row({{"b", 1.0}, {"a", std::string("x,y")}}, {{"z", 0.25}}, 0.0, 1.0, true, 1.0),
            make_row({{"a", std::string("q")}}, {{"w", 1.0}}, 0.0, 1.0, false, 1.0)};
  r.summary = summarize(r.rows);
  CHECK(to_csv(r) ==
        "experiment,row_index,a,b,tolerance,violation,w,z,margin,converged\n"
        "vp-bound,0,\"x,y\",1,1,0,,0.25,-1,true\n"
        "vp-bound,1,q,,1,0,1,,-1,false\n");
}

TEST_CASE("JSON round trip", "[experiments][report]") {
  RunOptions opt;
  opt.timing = true;
  const auto r = run_experiment(small_vp(), opt);
  REQUIRE(r.summary.runtime_seconds);
  const auto back = report_from_json(nlohmann::json::parse(to_json_text(r)));
  CHECK(back.experiment == r.experiment);
  CHECK(back.config == r.config);
  REQUIRE(back.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(back.rows[i].inputs == r.rows[i].inputs);
    CHECK(back.rows[i].outputs == r.rows[i].outputs);
    CHECK(back.rows[i].margin == r.rows[i].margin);
    CHECK(back.rows[i].converged == r.rows[i].converged);
  }
  CHECK(back.summary.worst_violation == r.summary.worst_violation);
  CHECK(back.summary.runtime_seconds == r.summary.runtime_seconds);
  CHECK(to_csv(back) == to_csv(r));

  const auto untimed = run_experiment(small_vp());
  CHECK_FALSE(untimed.summary.runtime_seconds);
  CHECK(to_json(untimed)["summary"]["runtime_seconds"].is_null());
  CHECK(untimed.config["tol_scale"] == 1.0);
}

TEST_CASE("unwritable report path", "[experiments][report]") {
  ExperimentReport r;
  r.experiment = "x";
  CHECK_THROWS_AS(emit(r, Format::Csv, "/proc/hardylab/none/report.csv"), IoError);
}

TEST_CASE("parallel map keeps order and reports the first failure", "[experiments]") {
  const auto v = parallel_map(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  try {
    parallel_map(50, 4, [](std::size_t i) -> int {
      if (i == 17 || i == 40) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("seeds are stable and independent", "[experiments]") {
  CHECK(task_seed(42, 1, 0) == task_seed(42, 1, 0));
  CHECK(task_seed(42, 1, 0) != task_seed(42, 1, 1));
  CHECK(task_seed(42, 1, 0) != task_seed(42, 2, 0));
  CHECK(task_seed(42, 1, 0) != task_seed(43, 1, 0));
  Rng g(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("reports do not depend on the number of jobs", "[experiments][determinism]") {
  for (const char* name : {"vp-bound", "cayley-identities", "no-weight-rn", "asym-counterexample"}) {
    auto c = resolve_config(name);
    if (c.samples > 0) c.samples = std::min(c.samples, 200);
    RunOptions one, many;
    many.jobs = 4;
    const auto a = run_experiment(c, one), b = run_experiment(c, one), m = run_experiment(c, many);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json_text(a) == to_json_text(b));
    CHECK(to_csv(a) == to_csv(m));
    CHECK(to_json_text(a) == to_json_text(m));
    auto d = c;
    d.seed = 43;
    if (std::string(name) == "vp-bound") CHECK(to_csv(run_experiment(d)) != to_csv(a));
  }
}

TEST_CASE("tolerance scale loosens every row", "[experiments]") {
  RunOptions opt;
  opt.tol_scale = 10.0;
  const auto r = run_experiment(small_vp(), opt);
  const auto base = run_experiment(small_vp());
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    CHECK(as_number(r.rows[i].outputs.at("tolerance")) == 10.0 * as_number(base.rows[i].outputs.at("tolerance")));
  CHECK(r.config["tol_scale"] == 10.0);
}

TEST_CASE("golden vp-bound report for seed 42", "[experiments][golden]") {
  const auto r = run_experiment(resolve_config("vp-bound"));
  CHECK(r.summary.pass);
  CHECK(to_csv(r) == slurp(std::string(HARDYLAB_GOLDEN_DIR) + "/vp_bound_seed42.csv"));
}
