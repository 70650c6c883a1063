#include <cmath>
#include <limits>
#include <stdexcept>

#include "adaprox/solvers.hpp"
#include "trace_builder.hpp"

namespace adaprox {

namespace {

void check_start(const Vector& x, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw DimensionError(std::string(what) + ": starting point has wrong dimension");
  if (!x.allFinite()) throw std::invalid_argument(std::string(what) + ": starting point is not finite");
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::budget: return "budget";
    case StopReason::gap: return "gap";
    case StopReason::fixed_point: return "fixed_point";
    case StopReason::exact_fixed_point: return "exact_fixed_point";
    case StopReason::iteration_limit: return "iteration_limit";
    case StopReason::stepsize_overflow: return "stepsize_overflow";
    case StopReason::curvature_breakdown: return "curvature_breakdown";
  }
  return "unknown";
}

void AdaPGConfig::validate(std::size_t dim) const {
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("adaPG: q must lie in [1, 2]");
  if (!(gamma_minus1 > 0.0) || !(gamma0 >= gamma_minus1) || !std::isfinite(gamma0))
    throw std::invalid_argument("adaPG: need gamma0 >= gamma_minus1 > 0");
  check_start(x_minus1, dim, "adaPG");
}

void StoppingRule::validate() const {
  if (!max_operator_calls && !gap_threshold && !fixed_point_threshold && !max_iterations)
    throw std::invalid_argument("stopping rule: at least one criterion is required");
  if (gap_threshold && !(*gap_threshold >= 0.0)) throw std::invalid_argument("stopping rule: gap threshold < 0");
  if (fixed_point_threshold && !(*fixed_point_threshold >= 0.0))
    throw std::invalid_argument("stopping rule: fixed-point threshold < 0");
}

StepsizeChoice adapg_stepsize_choice(double gamma_k, double gamma_km1, double ell_k, double lip_k, double q) {
  if (!(gamma_k > 0.0) || !(gamma_km1 > 0.0)) throw std::invalid_argument("adaPG stepsize: stepsizes must be > 0");
  const double first = std::sqrt(1.0 / q + gamma_k / gamma_km1);
  const double bracket = gamma_k * gamma_k * lip_k * lip_k - (2.0 - q) * gamma_k * ell_k + 1.0 - q;
  const double second =
      bracket > 0.0 ? 1.0 / std::sqrt(2.0 * bracket) : std::numeric_limits<double>::infinity();
  if (second <= first) return {gamma_k * second, StepBranch::second};
  return {gamma_k * first, StepBranch::first};
}

double adapg_stepsize(double gamma_k, double gamma_km1, double ell_k, double lip_k, double q) {
  return adapg_stepsize_choice(gamma_k, gamma_km1, ell_k, lip_k, q).gamma;
}

LipschitzEstimates local_lipschitz(const Vector& x_prev, const Vector& x_cur, const Vector& g_prev,
                                   const Vector& g_cur) {
  const Vector dx = x_cur - x_prev;
  const double dx2 = dx.squaredNorm();
  if (dx2 == 0.0) return {};
  const Vector dg = g_cur - g_prev;
  return {dx.dot(dg) / dx2, dg.norm() / std::sqrt(dx2)};
}

SolverTrace adapg_run(const CompositeProblem& prob, const AdaPGConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts) {
  cfg.validate(prob.dim());
  detail::TraceBuilder tb(prob, stop, opts, "adapg");
  tb.trace().x_init = cfg.x_minus1;
  tb.trace().gamma_init = cfg.gamma_minus1;
  tb.trace().q = cfg.q;

  Vector x_prev = cfg.x_minus1;
  LossEval e_prev = prob.f.value_grad(x_prev);
  ++tb.f_calls;
  ++tb.grad_calls;

  double gamma_prev = cfg.gamma_minus1;
  double gamma = cfg.gamma0;
  Vector x = prob.g.prox(gamma, x_prev - gamma * e_prev.grad);
  LossEval e;
  if (x == x_prev) {
    e = e_prev;
  } else {
    e = prob.f.value_grad(x);
    ++tb.f_calls;
    ++tb.grad_calls;
  }
  tb.push(x, e.value + prob.g.value(x), gamma, (x - x_prev).norm());
  if (tb.should_stop(detail::fixed_point_residual(prob, x, e.grad))) return tb.take();

  for (;;) {
    if (x == x_prev) {
      tb.finish(StopReason::exact_fixed_point);
      break;
    }
    const LipschitzEstimates est = local_lipschitz(x_prev, x, e_prev.grad, e.grad);
    const StepsizeChoice step = adapg_stepsize_choice(gamma, gamma_prev, est.ell, est.lip, cfg.q);
    if (!std::isfinite(step.gamma)) {
      tb.finish(StopReason::stepsize_overflow);
      break;
    }
    Vector x_next = prob.g.prox(step.gamma, x - step.gamma * e.grad);
    if (x_next == x) {
      tb.finish(StopReason::exact_fixed_point);
      break;
    }
    LossEval e_next = prob.f.value_grad(x_next);
    ++tb.f_calls;
    ++tb.grad_calls;

    gamma_prev = gamma;
    gamma = step.gamma;
    x_prev = std::move(x);
    x = std::move(x_next);
    e_prev = std::move(e);
    e = std::move(e_next);

    auto& r = tb.push(x, e.value + prob.g.value(x), gamma, (x - x_prev).norm());
    r.branch = step.branch;
    r.ell = est.ell;
    r.lip = est.lip;
    if (tb.should_stop(detail::fixed_point_residual(prob, x, e.grad))) break;
  }
  return tb.take();
}

InitialStepsizes tune_initial_stepsize(const CompositeProblem& prob, const Vector& x_init, double gamma_guess,
                                       double q) {
  if (!(gamma_guess > 0.0)) throw std::invalid_argument("tune_initial_stepsize: guess must be > 0");
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("tune_initial_stepsize: q must lie in [1, 2]");

  const LossEval e0 = prob.f.value_grad(x_init);
  // One offline step with `gamma`; returns the inverse L-estimate or 0 when
  // the step is degenerate (no movement or zero estimate).
  auto inverse_lipschitz = [&](double gamma, double& lip_out) {
    const Vector x1 = prob.g.prox(gamma, x_init - gamma * e0.grad);
    if (x1 == x_init) return 0.0;
    const LossEval e1 = prob.f.value_grad(x1);
    lip_out = local_lipschitz(x_init, x1, e0.grad, e1.grad).lip;
    return lip_out > 0.0 ? 1.0 / lip_out : 0.0;
  };

  double lip = 0.0;
  double gamma0 = inverse_lipschitz(gamma_guess, lip);
  if (gamma0 == 0.0) return {gamma_guess, gamma_guess};
  if (gamma0 * 10.0 < gamma_guess) {
    double lip2 = 0.0;
    const double again = inverse_lipschitz(gamma0, lip2);
    if (again > 0.0) {
      gamma0 = again;
      lip = lip2;
    }
  }

  // Largest gamma_{-1} <= gamma0 with 1/q + gamma0/gamma_{-1} >= 1/(2 gamma0^2 L0^2).
  const double target = 1.0 / (2.0 * gamma0 * gamma0 * lip * lip) - 1.0 / q;
  const double gamma_minus1 = target > 1.0 ? gamma0 / target : gamma0;
  return {gamma0, gamma_minus1};
}

}  // namespace adaprox
