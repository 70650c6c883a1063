#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "adaprox/harness.hpp"

using namespace adaprox;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

ExperimentConfig small_lasso() {
  ExperimentConfig cfg;
  cfg.problem.family = "lasso";
  cfg.problem.m = 40;
  cfg.problem.n = 90;
  cfg.problem.k = 6;
  cfg.problem.seed = 3;
  cfg.solvers = default_lineup();
  cfg.budget = 600;
  return cfg;
}

}  // namespace

TEST_CASE("solver specs") {
  auto s = parse_solver_spec("adapg:q=1.5");
  CHECK(s.kind == SolverSpec::Kind::adapg);
  CHECK(s.q == 1.5);
  CHECK(s.id() == "adapg:q=1.5");
  s = parse_solver_spec("nupg:eps=1e-10:eta=0.7");
  CHECK(s.epsilon == 1e-10);
  CHECK(s.eta == 0.7);
  CHECK(parse_solver_spec(s.id()).eta == 0.7);
  CHECK(parse_solver_spec("nupg").id() == "nupg");
  CHECK(parse_solver_spec("acfgm:alpha=0.5").alpha == 0.5);
  const auto beta = parse_solver_spec("acfgm:beta=0.2");
  CHECK(parse_solver_spec(beta.id()).beta == 0.2);
  CHECK(parse_solver_list("adapg:q=1, fnupg ,acfgm").size() == 3);
  CHECK(default_lineup().size() == 6);
  CHECK_THROWS_AS(parse_solver_spec("ista"), ConfigError);
  CHECK_THROWS_AS(parse_solver_spec("adapg:q=3"), ConfigError);
  CHECK_THROWS_AS(parse_solver_spec("adapg:eta=0.5"), ConfigError);
  CHECK_THROWS_AS(parse_solver_spec("nupg:eps"), ConfigError);
  CHECK_THROWS_AS(parse_solver_spec("nupg:eps=abc"), ConfigError);
  CHECK_THROWS_AS(parse_solver_spec("acfgm:beta=0.9"), ConfigError);
}

TEST_CASE("presets") {
  const auto small = preset("lasso-small");
  CHECK(small.problem.family == "lasso");
  CHECK(small.problem.m == 100);
  CHECK(small.problem.n == 300);
  CHECK(small.problem.k == 30);
  CHECK(small.problem.p == 1.5);
  CHECK(small.problem.lambda == 1.0);
  CHECK(small.problem.seed == 50);
  CHECK(small.solvers.size() == 6);

  const auto mix = preset("mixture-4000");
  CHECK(mix.problem.family == "mixture");
  CHECK(mix.problem.n == 4000);
  CHECK(mix.problem.blocks.size() == 6);
  CHECK(mix.problem.blocks[0] == std::make_pair(std::size_t{400}, 1.8));
  CHECK(mix.problem.blocks[5] == std::make_pair(std::size_t{300}, 1.5));
  CHECK(mix.problem.radius == 0.1);

  const auto cov = preset("svm-covtype.binary-20");
  CHECK(cov.problem.dataset == "covtype.binary");
  CHECK(cov.problem.lambda == 20.0);
  CHECK(preset("logistic-mushrooms-0.005").problem.family == "logistic");
  CHECK(preset("lasso-500x1000x200-p1.9").problem.k == 200);
  CHECK_THROWS_AS(preset("nope"), ConfigError);

  std::size_t lasso = 0;
  for (const auto& name : preset_names()) {
    CHECK_NOTHROW(preset(name));
    lasso += name.rfind("lasso-", 0) == 0 && name != "lasso-small";
  }
  CHECK(lasso == 12);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"({
    "problem": {"family": "lasso", "m": 20, "n": 50, "k": 3, "p": 1.7, "lambda": 0.5, "seed": 9},
    "solvers": ["adapg:q=2", "nupg"],
    "budget": 300,
    "out": "x.csv"
  })");
  CHECK(cfg.problem.m == 20);
  CHECK(cfg.problem.p == 1.7);
  CHECK(cfg.solvers.size() == 2);
  CHECK(cfg.budget == 300);
  CHECK(cfg.out == "x.csv");

  const auto from_preset = parse_config(R"({"preset": "lasso-small", "solvers": "adapg:q=1", "budget": 50})");
  CHECK(from_preset.problem.m == 100);
  CHECK(from_preset.solvers.size() == 1);

  const auto mix = parse_config(R"({"problem": {"family": "mixture", "n": 10, "blocks": [[4, 1.5], {"m": 3, "p": 2}]}, "solvers": ["fnupg"]})");
  CHECK(mix.problem.blocks.size() == 2);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "lasso-small", "solvers": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "lasso-small", "budget": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "lasso-small", "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"family": "ridge"}, "solvers": ["nupg"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"family": "lasso", "m": "x"}, "solvers": ["nupg"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"family": "svm"}, "solvers": ["nupg"]})"), ConfigError);
  CHECK_THROWS(load_config("/nonexistent/config.json"));
}

TEST_CASE("experiment on a small Lasso: CSV shape and invariants") {
  const auto cfg = small_lasso();
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.certified);
  CHECK(res.traces.size() == 6);
  std::ostringstream os;
  write_csv(res, os);
  const auto ls = lines(os.str());
  CHECK(ls[0] == "solver,iter,a_calls,f_calls,grad_calls,cost,gap,gamma,residual,elapsed_ms");
  std::map<std::string, std::pair<long, long>> last;  // iter, a_calls
  std::set<std::string> ids;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    REQUIRE(f.size() == 10);
    ids.insert(f[0]);
    const long iter = std::stol(f[1]), calls = std::stol(f[2]);
    if (last.count(f[0])) {
      CHECK(iter == last[f[0]].first + 1);
      CHECK(calls > last[f[0]].second);
    } else {
      CHECK(iter == 0);
    }
    last[f[0]] = {iter, calls};
  }
  CHECK(ids.size() == 6);
  for (const auto& t : res.traces) {
    CHECK(t.records.back().a_calls <= cfg.budget + 130);
    CHECK(t.records[t.records.size() - 2].a_calls < cfg.budget);
  }
  std::ostringstream summary;
  write_summary(res, summary);
  CHECK(summary.str().find("adapg:q=1.5") != std::string::npos);
}

TEST_CASE("tiny budget truncates every trace") {
  auto cfg = small_lasso();
  cfg.budget = 10;
  const ExperimentResult res = run_experiment(cfg);
  for (const auto& t : res.traces) {
    if (t.solver.rfind("adapg", 0) == 0 || t.solver == "acfgm") CHECK(t.records.back().a_calls <= 12);
    CHECK(t.records[t.records.size() - 2].a_calls < 10);
  }
}

TEST_CASE("runs are reproducible apart from timing") {
  auto cfg = small_lasso();
  cfg.budget = 300;
  auto strip = [](const std::string& csv) {
    std::string out;
    for (const auto& l : lines(csv)) out += l.substr(0, l.rfind(',')) + "\n";
    return out;
  };
  std::ostringstream a, b;
  write_csv(run_experiment(cfg), a);
  write_csv(run_experiment(cfg), b);
  CHECK(strip(a.str()) == strip(b.str()));
}

TEST_CASE("uncertified problems report gaps against the best cost") {
  ExperimentConfig cfg;
  cfg.problem.family = "mixture";
  cfg.problem.n = 40;
  cfg.problem.blocks = {{20, 1.8}, {10, 1.5}};
  cfg.problem.seed = 2;
  cfg.solvers = parse_solver_list("adapg:q=1.5,nupg");
  cfg.budget = 400;
  const ExperimentResult res = run_experiment(cfg);
  CHECK_FALSE(res.certified);
  double best = 1e300;
  for (const auto& t : res.traces)
    for (const auto& r : t.records) {
      CHECK(r.gap >= 0.0);
      best = std::min(best, r.gap);
    }
  CHECK(best == 0.0);
}

TEST_CASE("dataset lookup honours the environment variable") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "adaprox_ds_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "toy") << "+1 1:1 2:0.5\n-1 2:1\n+1 1:-0.5 3:2\n-1 1:0.25\n";
  }
  setenv(kDatasetDirEnv, dir.c_str(), 1);
  CHECK(dataset_dir() == dir);
  CHECK(resolve_dataset("toy") == dir / "toy");
  ExperimentConfig cfg;
  cfg.problem.family = "svm";
  cfg.problem.dataset = "toy";
  cfg.problem.lambda = 0.01;
  cfg.solvers = parse_solver_list("adapg:q=1.5");
  cfg.budget = 50;
  CHECK(run_experiment(cfg).traces.size() == 1);
  cfg.problem.family = "logistic";
  CHECK(run_experiment(cfg).traces.size() == 1);
  cfg.problem.dataset = "missing";
  CHECK_THROWS(run_experiment(cfg));
  unsetenv(kDatasetDirEnv);
  CHECK(dataset_dir() == fs::path("datasets"));
  fs::remove_all(dir);
}
