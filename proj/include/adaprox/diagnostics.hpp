#pragma once

#include <string>
#include <vector>

#include "adaprox/solvers.hpp"

namespace adaprox {

// Local Hölder estimates between consecutive points for an assumed order nu.
// Equal points give all-zero estimates (0/0 = 0).
struct HolderEstimates {
  double ell = 0.0;     // <dx,dg>/||dx||^2
  double lip = 0.0;     // ||dg||/||dx||
  double nu = 1.0;
  double lambda = 0.0;  // gamma / ||dx||^{1-nu}
  double ell_nu = 0.0;  // <dx,dg>/||dx||^{1+nu}
  double lip_nu = 0.0;  // ||dg||/||dx||^nu
  double m_direct = 0.0;   // ||H(x) - H(x_prev)|| / ||dx||, H = id - gamma grad f
  double m_formula = 0.0;  // sqrt(1 + gamma^2 L^2 - 2 gamma ell)
  double m_nu = 0.0;       // m_direct * ||dx||^{1-nu}
  double m_nu_bound = 0.0; // (1 + lambda lip_nu) ||dx||^{1-nu}
};

HolderEstimates estimates(const Vector& x_prev, const Vector& x_cur, const Vector& g_prev, const Vector& g_cur,
                          double gamma, double nu);

// An adaPG run with its starting point, re-evaluated from stored iterates.
// Index k = -1 .. K maps to storage slot k + 1.
struct AdaPGPath {
  double q = 1.0;
  std::vector<Vector> points;
  std::vector<Vector> grads;
  std::vector<double> gammas;
  std::vector<double> phis;

  long last() const { return static_cast<long>(points.size()) - 2; }
  const Vector& x(long k) const { return points[static_cast<std::size_t>(k + 1)]; }
  const Vector& g(long k) const { return grads[static_cast<std::size_t>(k + 1)]; }
  double gamma(long k) const { return gammas[static_cast<std::size_t>(k + 1)]; }
  double phi(long k) const { return phis[static_cast<std::size_t>(k + 1)]; }
  double rho(long k) const { return gamma(k) / gamma(k - 1); }
  double rho_max() const;
};

// Needs an adaPG trace produced with keep_iterates.
AdaPGPath reconstruct_path(const SolverTrace& trace, const CompositeProblem& prob);

double rho_max(double q, double gamma0, double gamma_minus1);

struct LyapunovSeries {
  std::vector<double> u;        // U_k, k = 0..K
  std::vector<double> gaps;     // P_k, k = 0..K
  double gap_init = 0.0;        // P_{-1}
  std::vector<double> slack;    // descent-inequality slack, k = 0..K-1
  std::vector<StepBranch> branches;  // branch that produced gamma_{k+1}, k = 0..K-1
  double rho_max = 0.0;
};

LyapunovSeries lyapunov_series(const AdaPGPath& path, const Certificate& cert);
LyapunovSeries lyapunov_series(const SolverTrace& trace, const CompositeProblem& prob, double q);

struct GapBound {
  double lhs = 0.0;  // min_{i<=K} P_i
  double rhs = 0.0;  // U_0 / sum_{k=1}^{K+1} gamma_k
};

// One entry per K = 1 .. K_last - 1.
std::vector<GapBound> min_gap_bound_series(const AdaPGPath& path, const LyapunovSeries& series);
// Largest available K; rhs = +inf when the trace is too short to sum any stepsize.
GapBound min_gap_bound(const SolverTrace& trace, const CompositeProblem& prob);

struct RateEnvelope {
  std::vector<double> bound;     // per K = 0..K_last
  std::vector<double> best_gap;  // min_{i<=K} P_i
};

double rate_constant(double q, double nu, double rho_max);
RateEnvelope rate_envelope(const AdaPGPath& path, const LyapunovSeries& series, double nu, double lip_holder);
RateEnvelope rate_envelope(const SolverTrace& trace, const CompositeProblem& prob, double q, double nu,
                           double lip_holder);

// Pass/fail summary of one property over a run.
struct CheckResult {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // most negative margin seen (0 when none negative)

  void record(double margin) {
    ++checked;
    if (margin < worst) worst = margin;
    if (margin < 0.0) {
      ++violations;
      ok = false;
    }
  }
  void merge(const CheckResult& other);
};

CheckResult check_lyapunov_descent(const LyapunovSeries& s, double tol = 1e-10);
CheckResult check_descent_slack(const LyapunovSeries& s, double tol = 1e-10);
CheckResult check_min_gap(const AdaPGPath& path, const LyapunovSeries& s);
CheckResult check_ratio_cap(const AdaPGPath& path, double rel_tol = 1e-12);
// lambda_k >= 1/(sqrt2 L_k^nu rho_max) and rho_{k+1} >= 1/(sqrt2 lambda_k L_k^nu) on K2 steps.
CheckResult check_k2_bound(const AdaPGPath& path, double nu, double rel_tol = 1e-12);
CheckResult check_fne(const AdaPGPath& path, double rel_tol = 1e-9);
CheckResult check_residual_ratio(const AdaPGPath& path, double abs_tol = 1e-12);
CheckResult check_rate_envelope(const RateEnvelope& env, double rel_tol = 1e-12);

}  // namespace adaprox
