#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "adaprox/data.hpp"
#include "adaprox/harness.hpp"
#include "adaprox/suites.hpp"

using namespace adaprox;

namespace {

int cmd_run(const std::string& preset_name, const std::string& config_path, const std::string& solvers,
            std::uint64_t budget, const std::string& out) {
  ExperimentConfig cfg;
  if (!preset_name.empty() && !config_path.empty()) throw ConfigError("give either --preset or --config, not both");
  if (!preset_name.empty())
    cfg = preset(preset_name);
  else if (!config_path.empty())
    cfg = load_config(config_path);
  else
    throw ConfigError("one of --preset or --config is required");
  if (!solvers.empty()) cfg.solvers = parse_solver_list(solvers);
  if (budget > 0) cfg.budget = budget;
  if (!out.empty()) cfg.out = out;
  if (cfg.out.empty()) cfg.out = cfg.name + ".csv";
  cfg.validate();

  const ExperimentResult res = run_experiment(cfg);
  std::ofstream csv(cfg.out);
  if (!csv) throw std::runtime_error("cannot write " + cfg.out);
  write_csv(res, csv);
  if (!csv) throw std::runtime_error("write failed for " + cfg.out);
  write_summary(res, std::cout);
  std::cout << "wrote " << cfg.out << "\n";
  return 0;
}

int cmd_gen_lasso(std::size_t m, std::size_t n, std::size_t k, double p, double lambda, std::uint64_t seed,
                  const std::string& out) {
  const GeneratedInstance g = generate_pnorm_lasso(m, n, k, p, lambda, seed);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  // A as LibSVM rows with b_i in the label slot, then x* and phi* as comments.
  os.precision(17);
  os << "# pnorm-lasso m=" << m << " n=" << n << " k=" << k << " p=" << p << " lambda=" << lambda
     << " seed=" << seed << "\n";
  os << "# phi_star " << g.phi_star << "\n";
  os << "# x_star";
  for (Eigen::Index j = 0; j < g.x_star.size(); ++j)
    if (g.x_star[j] != 0.0) os << ' ' << j + 1 << ':' << g.x_star[j];
  os << "\n";
  for (Eigen::Index i = 0; i < g.A.rows(); ++i) {
    os << g.b[i];
    for (Eigen::Index j = 0; j < g.A.cols(); ++j)
      if (g.A(i, j) != 0.0) os << ' ' << j + 1 << ':' << g.A(i, j);
    os << "\n";
  }
  if (!os) throw std::runtime_error("write failed for " + out);
  std::cout << "wrote " << out << " (phi* = " << g.phi_star << ", kkt residual "
            << kkt_residual(g.to_problem(), g.x_star) << ")\n";
  return 0;
}

int cmd_check(const std::string& suite) {
  bool ok = true;
  run_suite(suite, [&](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
    ok = ok && r.pass;
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive proximal gradient experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a solver line-up and write a CSV trace");
  std::string preset_name, config_path, solvers, out;
  std::uint64_t budget = 0;
  run->add_option("--preset", preset_name, "preset name (see --list-presets)");
  run->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--solvers", solvers, "comma separated solver specs, e.g. adapg:q=1.5,nupg");
  run->add_option("--budget", budget, "operator-call budget");
  run->add_option("--out", out, "CSV output path");
  bool list = false;
  run->add_flag("--list-presets", list, "print preset names and exit");

  auto* gen = app.add_subcommand("gen-lasso", "generate a p-norm Lasso instance with known solution");
  std::size_t m = 0, n = 0, k = 0;
  double p = 1.5, lambda = 1.0;
  std::uint64_t seed = 50;
  std::string gen_out;
  gen->add_option("--m", m, "rows")->required();
  gen->add_option("--n", n, "columns")->required();
  gen->add_option("--k", k, "support size")->required();
  gen->add_option("--p", p, "residual power in (1, 2]");
  gen->add_option("--lambda", lambda, "l1 weight");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", gen_out, "output file")->required();

  auto* check = app.add_subcommand("check", "run diagnostic suites");
  std::string suite;
  check->add_option("--suite", suite, "invariants | rates | all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      if (list) {
        for (const auto& name : preset_names()) std::cout << name << "\n";
        return 0;
      }
      return cmd_run(preset_name, config_path, solvers, budget, out);
    }
    if (*gen) return cmd_gen_lasso(m, n, k, p, lambda, seed, gen_out);
    if (*check) return cmd_check(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
