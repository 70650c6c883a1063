#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adaprox/solvers.hpp"
#include "trace_builder.hpp"

namespace adaprox {

void ACFGMConfig::validate(std::size_t dim) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("AC-FGM: epsilon must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("AC-FGM: beta must lie in (0, 1)");
  // [beta/(4(1-beta)c1), 1/(3c1)] is empty otherwise
  if (beta > 4.0 / 7.0) throw std::invalid_argument("AC-FGM: beta > 4/7 leaves no admissible gamma_1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("AC-FGM: alpha must lie in [0, 1]");
  if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) throw std::invalid_argument("AC-FGM: gamma1 must be > 0");
  if (static_cast<std::size_t>(x0.size()) != dim) throw DimensionError("AC-FGM: starting point has wrong dimension");
  if (!x0.allFinite()) throw std::invalid_argument("AC-FGM: starting point is not finite");
}

namespace acfgm {

double first_estimate(double dx_norm, double dg_norm, double epsilon) {
  if (dx_norm == 0.0) return 0.0;
  const double q = epsilon / 4.0;
  const double dx2 = dx_norm * dx_norm;
  return (std::sqrt(dx2 * dg_norm * dg_norm + q * q) - q) / dx2;
}

double estimate(double dg_norm, double f_prev, double f_cur, double inner_gcur_dx, double epsilon, double tau_k) {
  // inner_gcur_dx = <grad f(x^k), x^{k-1} - x^k>
  const double denom = 2.0 * (f_prev - f_cur - inner_gcur_dx) + epsilon / tau_k;
  if (!(denom > 0.0)) throw NumericalError("AC-FGM: non-positive curvature denominator");
  return dg_norm * dg_norm / denom;
}

double next_tau(double tau_k, double gamma_k, double c_k, double alpha, double beta) {
  return tau_k + alpha / 2.0 + 2.0 * (1.0 - alpha) * gamma_k * c_k / (beta * tau_k);
}

double next_gamma(double tau_km1, double tau_k, double gamma_k, double c_k, double beta) {
  const double growth = (tau_km1 + 1.0) / tau_k * gamma_k;
  if (c_k == 0.0) return growth;
  return std::min(growth, beta * tau_k / (4.0 * c_k));
}

double first_gamma(double c1, double beta) {
  const double lo = beta / (4.0 * (1.0 - beta) * c1);
  const double hi = 1.0 / (3.0 * c1);
  return 0.5 * (lo + hi);
}

}  // namespace acfgm

// Auto-conditioned fast gradient method:
//   z^{k+1} = prox_{gamma_{k+1} g}(y^k - gamma_{k+1} grad f(x^k))
//   y^{k+1} = (1 - beta_{k+1}) y^k + beta_{k+1} z^{k+1}
//   x^{k+1} = (z^{k+1} + tau_{k+1} x^k) / (1 + tau_{k+1})
// One value+gradient evaluation (2 operator calls) per iteration.
SolverTrace acfgm_run(const CompositeProblem& prob, const ACFGMConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts) {
  cfg.validate(prob.dim());
  detail::TraceBuilder tb(prob, stop, opts, "acfgm");

  Vector x = cfg.x0;
  LossEval e = prob.f.value_grad(x);
  ++tb.f_calls;
  ++tb.grad_calls;

  // Offline trial step for c_1.
  double c1 = 0.0;
  {
    const Vector xt = prob.g.prox(cfg.gamma1, x - cfg.gamma1 * e.grad);
    if (xt != x) {
      const LossEval et = prob.f.value_grad(xt);
      ++tb.f_calls;
      ++tb.grad_calls;
      c1 = acfgm::first_estimate((xt - x).norm(), (et.grad - e.grad).norm(), cfg.epsilon);
    }
  }

  tb.push(x, e.value + prob.g.value(x), cfg.gamma1, 0.0);
  if (tb.should_stop(detail::fixed_point_residual(prob, x, e.grad))) return tb.take();

  Vector y = x;
  Vector x_prev;
  LossEval e_prev;
  double gamma = 0.0;
  double tau = 0.0;
  double tau_prev = 0.0;
  double c = c1;

  for (std::size_t k = 0;; ++k) {
    // Parameters for step k -> k+1.
    double gamma_next;
    double tau_next;
    double beta_next;
    if (k == 0) {
      gamma_next = c1 > 0.0 ? acfgm::first_gamma(c1, cfg.beta) : cfg.gamma1;
      tau_next = 0.0;
      beta_next = 0.0;
    } else if (k == 1) {
      gamma_next = c1 > 0.0 ? cfg.beta / (2.0 * c1) : cfg.gamma1;
      tau_next = 2.0;
      beta_next = cfg.beta;
    } else {
      gamma_next = acfgm::next_gamma(tau_prev, tau, gamma, c, cfg.beta);
      tau_next = acfgm::next_tau(tau, gamma, c, cfg.alpha, cfg.beta);
      beta_next = cfg.beta;
    }
    if (!std::isfinite(gamma_next) || !std::isfinite(tau_next)) {
      tb.finish(StopReason::stepsize_overflow);
      break;
    }

    const Vector z = prob.g.prox(gamma_next, y - gamma_next * e.grad);
    y = (1.0 - beta_next) * y + beta_next * z;
    Vector x_next = (z + tau_next * x) / (1.0 + tau_next);
    LossEval e_next = prob.f.value_grad(x_next);
    ++tb.f_calls;
    ++tb.grad_calls;

    tau_prev = tau;
    tau = tau_next;
    gamma = gamma_next;
    x_prev = std::move(x);
    x = std::move(x_next);
    e_prev = std::move(e);
    e = std::move(e_next);

    bool breakdown = false;
    if (k >= 1) {
      try {
        c = acfgm::estimate((e.grad - e_prev.grad).norm(), e_prev.value, e.value, e.grad.dot(x_prev - x),
                            cfg.epsilon, tau);
      } catch (const NumericalError&) {
        breakdown = true;
      }
    }

    auto& r = tb.push(x, e.value + prob.g.value(x), gamma, (x - x_prev).norm());
    r.tau = tau;
    r.beta = beta_next;
    r.lip = breakdown ? kNaN : c;
    if (breakdown) {
      tb.finish(StopReason::curvature_breakdown);
      break;
    }
    if (tb.should_stop(detail::fixed_point_residual(prob, x, e.grad))) break;
  }
  return tb.take();
}

}  // namespace adaprox
