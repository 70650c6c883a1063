#include <cmath>
#include <stdexcept>

#include "adaprox/solvers.hpp"
#include "trace_builder.hpp"

namespace adaprox {

namespace {

constexpr int kMaxHalvings = 60;

}  // namespace

void NUPGConfig::validate(std::size_t dim) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("NUPG: epsilon must be > 0");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("NUPG: eta must lie in (0, 1)");
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("NUPG: gamma0 must be > 0");
  if (static_cast<std::size_t>(x0.size()) != dim) throw DimensionError("NUPG: starting point has wrong dimension");
  if (!x0.allFinite()) throw std::invalid_argument("NUPG: starting point is not finite");
}

// Universal primal gradient method. Per iteration: one transpose for
// grad f(x^k) (A x^k is cached) and one forward per backtracking trial.
SolverTrace nupg_run(const CompositeProblem& prob, const NUPGConfig& cfg, const StoppingRule& stop,
                     const RunOptions& opts) {
  cfg.validate(prob.dim());
  detail::TraceBuilder tb(prob, stop, opts, "nupg");

  Vector x = cfg.x0;
  Vector ax = prob.f.image(x);
  double fx = prob.f.value_from_image(x, ax);
  ++tb.f_calls;
  double gamma = cfg.gamma0;
  tb.push(x, fx + prob.g.value(x), gamma, 0.0);
  if (tb.should_stop()) return tb.take();

  for (;;) {
    const Vector grad = prob.f.grad_from_image(x, ax);
    ++tb.grad_calls;

    double trial = 2.0 * gamma;
    if (!std::isfinite(trial)) {
      tb.finish(StopReason::stepsize_overflow);
      break;
    }
    Vector x_next;
    Vector ax_next;
    double f_next = 0.0;
    int trials = 0;
    bool accepted = false;
    for (int m = 0; m <= kMaxHalvings; ++m) {
      x_next = prob.g.prox(trial, x - trial * grad);
      ax_next = prob.f.image(x_next);
      f_next = prob.f.value_from_image(x_next, ax_next);
      ++tb.f_calls;
      ++trials;
      const Vector dx = x_next - x;
      const double model = fx + grad.dot(dx) + dx.squaredNorm() / (2.0 * trial) + 0.5 * cfg.epsilon;
      if (f_next <= model) {
        accepted = true;
        break;
      }
      trial *= cfg.eta;
    }
    if (!accepted) throw NumericalError("NUPG: linesearch failed after 60 reductions");

    const double step = (x_next - x).norm();
    gamma = trial;
    x = std::move(x_next);
    ax = std::move(ax_next);
    fx = f_next;
    auto& r = tb.push(x, fx + prob.g.value(x), gamma, step);
    r.ls_trials = trials;
    if (tb.should_stop()) break;
  }
  return tb.take();
}

// Universal fast gradient method (estimate-sequence form). Per iteration:
// one forward for A v_k, then per backtracking trial one transpose for
// grad f(x_{k+1}) and one forward for A x_hat; A x_{k+1} and A y_{k+1} follow
// by linearity.
SolverTrace fnupg_run(const CompositeProblem& prob, const NUPGConfig& cfg, const StoppingRule& stop,
                      const RunOptions& opts) {
  cfg.validate(prob.dim());
  detail::TraceBuilder tb(prob, stop, opts, "fnupg");

  const Vector& x0 = cfg.x0;
  Vector y = x0;
  Vector ay = prob.f.image(y);
  double fy = prob.f.value_from_image(y, ay);
  ++tb.f_calls;
  Vector v = x0;
  Vector grad_sum = Vector::Zero(x0.size());
  double weight_sum = 0.0;
  double lip = 1.0 / cfg.gamma0;
  const double grow = 1.0 / cfg.eta;

  tb.push(y, fy + prob.g.value(y), cfg.gamma0, 0.0);
  if (tb.should_stop()) return tb.take();

  for (;;) {
    if (!(lip > 0.0) || !std::isfinite(1.0 / lip)) {
      tb.finish(StopReason::stepsize_overflow);
      break;
    }
    const Vector av = prob.f.image(v);
    double trial_lip = lip;
    int trials = 0;
    bool accepted = false;
    double a = 0.0;
    Vector grad_x;
    Vector y_next;
    Vector ay_next;
    double f_next = 0.0;
    for (int i = 0; i <= kMaxHalvings; ++i) {
      ++trials;
      // a^2 M = A_k + a
      a = (1.0 + std::sqrt(1.0 + 4.0 * trial_lip * weight_sum)) / (2.0 * trial_lip);
      const double tau = a / (weight_sum + a);
      const Vector x = tau * v + (1.0 - tau) * y;
      const Vector ax = tau * av + (1.0 - tau) * ay;
      const double fx = prob.f.value_from_image(x, ax);
      ++tb.f_calls;
      grad_x = prob.f.grad_from_image(x, ax);
      ++tb.grad_calls;
      const Vector x_hat = prob.g.prox(a, v - a * grad_x);
      const Vector ax_hat = prob.f.image(x_hat);
      y_next = tau * x_hat + (1.0 - tau) * y;
      ay_next = tau * ax_hat + (1.0 - tau) * ay;
      f_next = prob.f.value_from_image(y_next, ay_next);
      ++tb.f_calls;
      const Vector d = y_next - x;
      const double model = fx + grad_x.dot(d) + 0.5 * trial_lip * d.squaredNorm() + 0.5 * cfg.epsilon * tau;
      if (f_next <= model) {
        accepted = true;
        break;
      }
      trial_lip *= grow;
    }
    if (!accepted) throw NumericalError("F-NUPG: linesearch failed after 60 increases");

    weight_sum += a;
    grad_sum += a * grad_x;
    v = prob.g.prox(weight_sum, x0 - grad_sum);
    lip = trial_lip * cfg.eta;

    const double step = (y_next - y).norm();
    y = std::move(y_next);
    ay = std::move(ay_next);
    fy = f_next;
    auto& r = tb.push(y, fy + prob.g.value(y), 1.0 / trial_lip, step);
    r.ls_trials = trials;
    r.lip = trial_lip;
    if (tb.should_stop()) break;
  }
  return tb.take();
}

}  // namespace adaprox
