#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adaprox/objectives.hpp"

namespace adaprox {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct AdaPGConfig {
  double q = 1.5;
  double gamma0 = 1.0;
  double gamma_minus1 = 1.0;
  Vector x_minus1;  // starting point; x^0 is one prox-gradient step from here

  void validate(std::size_t dim) const;
};

struct NUPGConfig {
  double epsilon = 1e-12;
  double eta = 0.5;
  double gamma0 = 1.0;
  Vector x0;

  void validate(std::size_t dim) const;
};

inline const double kDefaultAcfgmBeta = 1.0 - std::sqrt(3.0) / 2.0;

struct ACFGMConfig {
  double epsilon = 1e-12;
  double beta = kDefaultAcfgmBeta;
  double alpha = 0.0;
  double gamma1 = 1.0;  // stepsize of the offline trial step that yields c_1
  Vector x0;

  void validate(std::size_t dim) const;
};

// Any subset of criteria; a run stops at the first that fires.
struct StoppingRule {
  std::optional<std::uint64_t> max_operator_calls;
  std::optional<double> gap_threshold;          // needs a certificate
  std::optional<double> fixed_point_threshold;  // ||x - prox_g(1, x - grad f(x))||
  std::optional<std::size_t> max_iterations;

  void validate() const;
};

enum class StopReason { none, budget, gap, fixed_point, exact_fixed_point, iteration_limit, stepsize_overflow,
                        curvature_breakdown };
const char* to_string(StopReason r);

// Which term of the adaPG stepsize minimum is active. Ties count as `second`.
enum class StepBranch { none, first, second };

struct TraceRecord {
  std::size_t iter = 0;
  std::uint64_t a_calls = 0;  // forward + transpose since the run started
  std::uint64_t f_calls = 0;
  std::uint64_t grad_calls = 0;
  double cost = kNaN;
  double gap = kNaN;  // cost - phi*, NaN without certificate
  double gamma = kNaN;
  double residual = kNaN;  // ||x^k - x^{k-1}||
  double elapsed_ms = 0.0;

  // Solver specific; NaN / 0 when not applicable.
  int ls_trials = 0;
  StepBranch branch = StepBranch::none;
  double ell = kNaN;  // adaPG: ell_k
  double lip = kNaN;  // adaPG: L_k, AC-FGM: c_k
  double tau = kNaN;  // AC-FGM
  double beta = kNaN;  // AC-FGM
};

struct SolverTrace {
  std::string solver;
  std::vector<TraceRecord> records;
  Vector final_iterate;
  StopReason stop_reason = StopReason::none;

  // Filled when RunOptions::keep_iterates is set: iterates[k] is the point of records[k].
  std::vector<Vector> iterates;
  // adaPG only: x^{-1} and gamma_{-1}.
  std::optional<Vector> x_init;
  double gamma_init = kNaN;
  double q = kNaN;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
};

struct RunOptions {
  bool keep_iterates = false;
};

// gamma_{k+1} from gamma_k, gamma_{k-1} and the local estimates.
double adapg_stepsize(double gamma_k, double gamma_km1, double ell_k, double lip_k, double q);

struct StepsizeChoice {
  double gamma = 0.0;
  StepBranch branch = StepBranch::none;
};
StepsizeChoice adapg_stepsize_choice(double gamma_k, double gamma_km1, double ell_k, double lip_k, double q);

// ell_k = <dx, dg>/||dx||^2 and L_k = ||dg||/||dx||, both 0 when dx = 0.
struct LipschitzEstimates {
  double ell = 0.0;
  double lip = 0.0;
};
LipschitzEstimates local_lipschitz(const Vector& x_prev, const Vector& x_cur, const Vector& g_prev,
                                   const Vector& g_cur);

SolverTrace adapg_run(const CompositeProblem& prob, const AdaPGConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts = {});

struct InitialStepsizes {
  double gamma0 = 0.0;
  double gamma_minus1 = 0.0;
};
InitialStepsizes tune_initial_stepsize(const CompositeProblem& prob, const Vector& x_init, double gamma_guess,
                                       double q);

SolverTrace nupg_run(const CompositeProblem& prob, const NUPGConfig& cfg, const StoppingRule& stop,
                     const RunOptions& opts = {});

SolverTrace fnupg_run(const CompositeProblem& prob, const NUPGConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts = {});

SolverTrace acfgm_run(const CompositeProblem& prob, const ACFGMConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts = {});

// AC-FGM sequence updates, exposed for testing.
namespace acfgm {
// c_1 from the first pair of points.
double first_estimate(double dx_norm, double dg_norm, double epsilon);
// c_k, k >= 2. Throws NumericalError when the denominator is not positive.
double estimate(double dg_norm, double f_prev, double f_cur, double inner_gcur_dx, double epsilon, double tau_k);
// tau_{k+1} for k >= 2
double next_tau(double tau_k, double gamma_k, double c_k, double alpha, double beta);
// gamma_{k+1} for k >= 2
double next_gamma(double tau_km1, double tau_k, double gamma_k, double c_k, double beta);
// midpoint of [beta/(4(1-beta)c_1), 1/(3c_1)]
double first_gamma(double c1, double beta);
}  // namespace acfgm

}  // namespace adaprox
