#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adaprox/solvers.hpp"

namespace adaprox {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kDatasetDirEnv = "ADAPROX_DATA_DIR";

struct SolverSpec {
  enum class Kind { adapg, nupg, fnupg, acfgm };
  Kind kind = Kind::adapg;
  double q = 1.5;
  double epsilon = 1e-12;
  double eta = 0.5;
  double alpha = 0.0;
  double beta = kDefaultAcfgmBeta;

  // Canonical text form, e.g. "adapg:q=1.5"; parse_solver_spec(id()) round-trips.
  std::string id() const;
};

// "adapg:q=1.5", "nupg:eps=1e-12:eta=0.5", "fnupg", "acfgm:alpha=0:beta=0.13"
SolverSpec parse_solver_spec(const std::string& text);
// Comma separated list of specs.
std::vector<SolverSpec> parse_solver_list(const std::string& text);
std::vector<SolverSpec> default_lineup();

struct ProblemSpec {
  std::string family;  // lasso | svm | logistic | mixture
  std::size_t m = 0, n = 0, k = 0;
  double p = 1.5;
  double lambda = 1.0;
  std::uint64_t seed = 50;
  std::string dataset;  // svm / logistic: file name or path
  std::vector<std::pair<std::size_t, double>> blocks;  // mixture
  double radius = 0.1;
};

struct ExperimentConfig {
  std::string name;
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  std::uint64_t budget = 20000;
  std::string out;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// $ADAPROX_DATA_DIR, else ./datasets
std::filesystem::path dataset_dir();
std::filesystem::path resolve_dataset(const std::string& name);

CompositeProblem build_problem(const ProblemSpec& spec);

inline constexpr std::array<double, 3> kGapThresholds{1e-3, 1e-6, 1e-9};

struct SolverSummary {
  std::string solver;
  std::array<std::optional<std::uint64_t>, 3> calls_to_gap;
  double final_gap = kNaN;
  double best_gap = kNaN;
  std::size_t iterations = 0;
  std::uint64_t a_calls = 0;
  StopReason stop = StopReason::none;
};

struct ExperimentResult {
  std::vector<SolverTrace> traces;  // gap columns filled in
  bool certified = false;           // gap is against phi*; otherwise against best cost seen
  double reference = kNaN;
  std::vector<SolverSummary> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const CompositeProblem& prob);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_csv(const ExperimentResult& res, std::ostream& out);
void write_summary(const ExperimentResult& res, std::ostream& out);

}  // namespace adaprox
