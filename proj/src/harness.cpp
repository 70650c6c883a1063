#include "adaprox/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adaprox/data.hpp"

namespace adaprox {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (s.empty() || ec != std::errc() || ptr != e) throw ConfigError("bad number for " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::vector<double>>& svm_grid() {
  static const std::map<std::string, std::vector<double>> g{
      {"phishing", {0.01, 0.005, 0.001}},
      {"a9a", {0.01, 0.005, 0.001}},
      {"w8a", {0.005, 0.003, 0.001}},
      {"covtype.binary", {20.0, 10.0, 1.0}},
  };
  return g;
}

const std::map<std::string, std::vector<double>>& logistic_grid() {
  static const std::map<std::string, std::vector<double>> g{
      {"mushrooms", {0.005, 0.001}},
      {"w8a", {0.003, 0.001}},
  };
  return g;
}

struct LassoShape {
  std::size_t m, n, k;
};
constexpr LassoShape kLassoShapes[] = {{100, 300, 30}, {200, 500, 60}, {500, 1000, 100}, {500, 1000, 200}};
constexpr double kLassoPowers[] = {1.5, 1.7, 1.9};
constexpr std::size_t kMixtureSizes[] = {1000, 2000, 3000, 4000};

ProblemSpec lasso_spec(std::size_t m, std::size_t n, std::size_t k, double p) {
  ProblemSpec s;
  s.family = "lasso";
  s.m = m;
  s.n = n;
  s.k = k;
  s.p = p;
  s.lambda = 1.0;
  s.seed = 50;
  return s;
}

std::vector<std::pair<std::size_t, double>> mixture_blocks() {
  return {{400, 1.8}, {300, 1.7}, {400, 1.6}, {100, 1.5}, {100, 1.5}, {300, 1.5}};
}

}  // namespace

std::string SolverSpec::id() const {
  switch (kind) {
    case Kind::adapg:
      return "adapg:q=" + short_num(q);
    case Kind::nupg:
    case Kind::fnupg: {
      std::string s = kind == Kind::nupg ? "nupg" : "fnupg";
      if (epsilon != 1e-12) s += ":eps=" + short_num(epsilon);
      if (eta != 0.5) s += ":eta=" + short_num(eta);
      return s;
    }
    case Kind::acfgm: {
      std::string s = "acfgm";
      if (alpha != 0.0) s += ":alpha=" + short_num(alpha);
      if (beta != kDefaultAcfgmBeta) s += ":beta=" + fmt(beta);
      if (epsilon != 1e-12) s += ":eps=" + short_num(epsilon);
      return s;
    }
  }
  return "?";
}

SolverSpec parse_solver_spec(const std::string& text) {
  const auto parts = split(trim(text), ':');
  if (parts.empty() || parts[0].empty()) throw ConfigError("empty solver spec");
  SolverSpec s;
  const std::string& name = parts[0];
  if (name == "adapg")
    s.kind = SolverSpec::Kind::adapg;
  else if (name == "nupg")
    s.kind = SolverSpec::Kind::nupg;
  else if (name == "fnupg")
    s.kind = SolverSpec::Kind::fnupg;
  else if (name == "acfgm")
    s.kind = SolverSpec::Kind::acfgm;
  else
    throw ConfigError("unknown solver '" + name + "'");

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ConfigError("solver option without value: '" + parts[i] + "'");
    const std::string key = parts[i].substr(0, eq);
    const double v = to_double(parts[i].substr(eq + 1), name + "." + key);
    using K = SolverSpec::Kind;
    if (s.kind == K::adapg && key == "q")
      s.q = v;
    else if ((s.kind == K::nupg || s.kind == K::fnupg || s.kind == K::acfgm) && (key == "eps" || key == "epsilon"))
      s.epsilon = v;
    else if ((s.kind == K::nupg || s.kind == K::fnupg) && key == "eta")
      s.eta = v;
    else if (s.kind == K::acfgm && key == "alpha")
      s.alpha = v;
    else if (s.kind == K::acfgm && key == "beta")
      s.beta = v;
    else
      throw ConfigError("unknown option '" + key + "' for " + name);
  }
  if (s.kind == SolverSpec::Kind::adapg && !(s.q >= 1.0 && s.q <= 2.0)) throw ConfigError("adapg: q must lie in [1, 2]");
  if (!(s.epsilon > 0.0)) throw ConfigError(name + ": eps must be positive");
  if (!(s.eta > 0.0 && s.eta < 1.0)) throw ConfigError(name + ": eta must lie in (0, 1)");
  if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) throw ConfigError("acfgm: alpha must lie in [0, 1]");
  if (!(s.beta > 0.0 && s.beta <= 4.0 / 7.0)) throw ConfigError("acfgm: beta must lie in (0, 4/7]");
  return s;
}

std::vector<SolverSpec> parse_solver_list(const std::string& text) {
  std::vector<SolverSpec> out;
  for (const auto& item : split(text, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_solver_spec(item));
  }
  return out;
}

std::vector<SolverSpec> default_lineup() {
  return parse_solver_list("adapg:q=1,adapg:q=1.5,adapg:q=2,nupg,fnupg,acfgm");
}

namespace {

void validate_lineup(const ExperimentConfig& cfg) {
  if (cfg.solvers.empty()) throw ConfigError("at least one solver is required");
  if (cfg.budget == 0) throw ConfigError("budget must be positive");
}

}  // namespace

void ExperimentConfig::validate() const {
  validate_lineup(*this);
  const auto& f = problem.family;
  if (f == "lasso") {
    if (problem.m == 0 || problem.n == 0) throw ConfigError("lasso: m and n must be positive");
    if (problem.k > problem.m || problem.m >= problem.n) throw ConfigError("lasso: need k <= m < n");
  } else if (f == "svm" || f == "logistic") {
    if (problem.dataset.empty()) throw ConfigError(f + ": dataset is required");
  } else if (f == "mixture") {
    if (problem.n == 0 || problem.blocks.empty()) throw ConfigError("mixture: n and blocks are required");
  } else {
    throw ConfigError("unknown problem family '" + f + "'");
  }
  if (!(problem.p > 1.0 && problem.p <= 2.0)) throw ConfigError("p must lie in (1, 2]");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("preset")) cfg = preset(j.at("preset").get<std::string>());
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("problem")) {
      const auto& p = j.at("problem");
      if (!p.is_object()) throw ConfigError("problem must be an object");
      ProblemSpec& s = cfg.problem;
      for (const auto& [key, val] : p.items()) {
        if (key == "family")
          s.family = val.get<std::string>();
        else if (key == "m")
          s.m = val.get<std::size_t>();
        else if (key == "n")
          s.n = val.get<std::size_t>();
        else if (key == "k")
          s.k = val.get<std::size_t>();
        else if (key == "p")
          s.p = val.get<double>();
        else if (key == "lambda")
          s.lambda = val.get<double>();
        else if (key == "seed")
          s.seed = val.get<std::uint64_t>();
        else if (key == "dataset")
          s.dataset = val.get<std::string>();
        else if (key == "radius")
          s.radius = val.get<double>();
        else if (key == "blocks") {
          s.blocks.clear();
          for (const auto& b : val) {
            if (b.is_array() && b.size() == 2)
              s.blocks.emplace_back(b[0].get<std::size_t>(), b[1].get<double>());
            else
              s.blocks.emplace_back(b.at("m").get<std::size_t>(), b.at("p").get<double>());
          }
        } else
          throw ConfigError("unknown problem field '" + key + "'");
      }
    }
    if (j.contains("solvers")) {
      cfg.solvers.clear();
      const auto& sv = j.at("solvers");
      if (sv.is_string())
        cfg.solvers = parse_solver_list(sv.get<std::string>());
      else
        for (const auto& item : sv) cfg.solvers.push_back(parse_solver_spec(item.get<std::string>()));
    }
    if (j.contains("budget")) {
      const double b = j.at("budget").get<double>();
      if (!(b > 0.0) || b != std::floor(b)) throw ConfigError("budget must be a positive integer");
      cfg.budget = static_cast<std::uint64_t>(b);
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    for (const auto& [key, val] : j.items())
      if (key != "preset" && key != "name" && key != "problem" && key != "solvers" && key != "budget" && key != "out")
        throw ConfigError("unknown config field '" + key + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has wrong type: ") + e.what());
  }
  if (cfg.name.empty()) cfg.name = cfg.problem.family;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out{"lasso-small"};
  for (const auto& s : kLassoShapes)
    for (double p : kLassoPowers)
      out.push_back("lasso-" + std::to_string(s.m) + "x" + std::to_string(s.n) + "x" + std::to_string(s.k) + "-p" +
                    short_num(p));
  for (const auto& [ds, grid] : svm_grid())
    for (double l : grid) out.push_back("svm-" + ds + "-" + short_num(l));
  for (const auto& [ds, grid] : logistic_grid())
    for (double l : grid) out.push_back("logistic-" + ds + "-" + short_num(l));
  for (std::size_t n : kMixtureSizes) out.push_back("mixture-" + std::to_string(n));
  return out;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.solvers = default_lineup();
  cfg.budget = 20000;
  cfg.out = name + ".csv";
  ProblemSpec& s = cfg.problem;

  if (name == "lasso-small") {
    s = lasso_spec(100, 300, 30, 1.5);
    return cfg;
  }
  for (const auto& sh : kLassoShapes)
    for (double p : kLassoPowers)
      if (name == "lasso-" + std::to_string(sh.m) + "x" + std::to_string(sh.n) + "x" + std::to_string(sh.k) + "-p" +
                      short_num(p)) {
        s = lasso_spec(sh.m, sh.n, sh.k, p);
        return cfg;
      }
  for (const auto& [ds, grid] : svm_grid())
    for (double l : grid)
      if (name == "svm-" + ds + "-" + short_num(l)) {
        s.family = "svm";
        s.dataset = ds;
        s.p = 1.5;
        s.lambda = l;
        return cfg;
      }
  for (const auto& [ds, grid] : logistic_grid())
    for (double l : grid)
      if (name == "logistic-" + ds + "-" + short_num(l)) {
        s.family = "logistic";
        s.dataset = ds;
        s.p = 1.5;
        s.lambda = l;
        return cfg;
      }
  for (std::size_t n : kMixtureSizes)
    if (name == "mixture-" + std::to_string(n)) {
      s.family = "mixture";
      s.n = n;
      s.blocks = mixture_blocks();
      s.radius = 0.1;
      s.seed = 50;
      return cfg;
    }
  throw ConfigError("unknown preset '" + name + "'");
}

std::filesystem::path dataset_dir() {
  if (const char* env = std::getenv(kDatasetDirEnv); env != nullptr && *env != '\0') return env;
  return "datasets";
}

std::filesystem::path resolve_dataset(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path direct(name);
  if (direct.has_parent_path() && fs::exists(direct)) return direct;
  const fs::path dir = dataset_dir();
  for (const char* ext : {"", ".txt", ".libsvm", ".svm"}) {
    const fs::path cand = dir / (name + ext);
    if (fs::exists(cand)) return cand;
  }
  if (fs::exists(direct)) return direct;
  throw std::runtime_error("dataset '" + name + "' not found in " + dir.string() + " (set " + kDatasetDirEnv + ")");
}

CompositeProblem build_problem(const ProblemSpec& spec) {
  if (spec.family == "lasso")
    return generate_pnorm_lasso(spec.m, spec.n, spec.k, spec.p, spec.lambda, spec.seed).to_problem();
  if (spec.family == "svm") return make_svm_problem(load_libsvm(resolve_dataset(spec.dataset)), spec.p, spec.lambda);
  if (spec.family == "logistic")
    return make_logistic_problem(load_libsvm(resolve_dataset(spec.dataset)), spec.p, spec.lambda);
  if (spec.family == "mixture") return generate_mixture(MixtureSpec{spec.n, spec.blocks, spec.radius, spec.seed});
  throw ConfigError("unknown problem family '" + spec.family + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const CompositeProblem& prob) {
  validate_lineup(cfg);
  const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(prob.dim()));
  StoppingRule stop;
  stop.max_operator_calls = cfg.budget;

  std::map<double, InitialStepsizes> tuned;
  auto tune = [&](double q) {
    auto it = tuned.find(q);
    if (it == tuned.end()) {
      const CompositeProblem scratch = prob.with_fresh_operator();
      it = tuned.emplace(q, tune_initial_stepsize(scratch, x0, 1.0, q)).first;
    }
    return it->second;
  };

  ExperimentResult res;
  for (const auto& spec : cfg.solvers) {
    const CompositeProblem run_prob = prob.with_fresh_operator();
    SolverTrace trace;
    switch (spec.kind) {
      case SolverSpec::Kind::adapg: {
        const auto init = tune(spec.q);
        AdaPGConfig c;
        c.q = spec.q;
        c.gamma0 = init.gamma0;
        c.gamma_minus1 = init.gamma_minus1;
        c.x_minus1 = x0;
        trace = adapg_run(run_prob, c, stop);
        break;
      }
      case SolverSpec::Kind::nupg:
      case SolverSpec::Kind::fnupg: {
        NUPGConfig c;
        c.epsilon = spec.epsilon;
        c.eta = spec.eta;
        c.gamma0 = tune(1.5).gamma0;
        c.x0 = x0;
        trace = spec.kind == SolverSpec::Kind::nupg ? nupg_run(run_prob, c, stop) : fnupg_run(run_prob, c, stop);
        break;
      }
      case SolverSpec::Kind::acfgm: {
        ACFGMConfig c;
        c.epsilon = spec.epsilon;
        c.alpha = spec.alpha;
        c.beta = spec.beta;
        c.gamma1 = tune(1.5).gamma0;
        c.x0 = x0;
        trace = acfgm_run(run_prob, c, stop);
        break;
      }
    }
    trace.solver = spec.id();
    res.traces.push_back(std::move(trace));
  }

  res.certified = prob.certificate.has_value();
  if (res.certified) {
    res.reference = prob.certificate->phi_star;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : res.traces)
      for (const auto& r : t.records)
        if (std::isfinite(r.cost)) best = std::min(best, r.cost);
    res.reference = best;
  }

  for (auto& t : res.traces) {
    SolverSummary s;
    s.solver = t.solver;
    s.iterations = t.iterations();
    s.stop = t.stop_reason;
    double best_gap = std::numeric_limits<double>::infinity();
    for (auto& r : t.records) {
      r.gap = r.cost - res.reference;
      best_gap = std::min(best_gap, r.gap);
      for (std::size_t i = 0; i < kGapThresholds.size(); ++i)
        if (!s.calls_to_gap[i] && r.gap <= kGapThresholds[i]) s.calls_to_gap[i] = r.a_calls;
    }
    if (!t.records.empty()) {
      s.final_gap = t.records.back().gap;
      s.a_calls = t.records.back().a_calls;
    }
    s.best_gap = best_gap;
    res.summary.push_back(std::move(s));
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, build_problem(cfg.problem));
}

void write_csv(const ExperimentResult& res, std::ostream& out) {
  std::ostringstream os;
  os << "solver,iter,a_calls,f_calls,grad_calls,cost,gap,gamma,residual,elapsed_ms\n";
  for (const auto& t : res.traces)
    for (const auto& r : t.records) {
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", r.elapsed_ms);
      os << t.solver << ',' << r.iter << ',' << r.a_calls << ',' << r.f_calls << ',' << r.grad_calls << ','
         << fmt(r.cost) << ',' << fmt(r.gap) << ',' << fmt(r.gamma) << ',' << fmt(r.residual) << ',' << ms << '\n';
    }
  out << os.str();
}

void write_summary(const ExperimentResult& res, std::ostream& out) {
  std::ostringstream os;
  os << (res.certified ? "gap against certified optimum " : "gap against best cost found ") << fmt(res.reference)
     << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %10s %10s %10s %8s %10s %12s  %s\n", "solver", "gap<=1e-3", "gap<=1e-6",
                "gap<=1e-9", "iters", "a_calls", "best_gap", "stop");
  os << line;
  for (const auto& s : res.summary) {
    std::string cols[3];
    for (std::size_t i = 0; i < 3; ++i) cols[i] = s.calls_to_gap[i] ? std::to_string(*s.calls_to_gap[i]) : "-";
    std::snprintf(line, sizeof line, "%-28s %10s %10s %10s %8zu %10llu %12.3e  %s\n", s.solver.c_str(),
                  cols[0].c_str(), cols[1].c_str(), cols[2].c_str(), s.iterations,
                  static_cast<unsigned long long>(s.a_calls), s.best_gap, to_string(s.stop));
    os << line;
  }
  out << os.str();
}

}  // namespace adaprox
