#pragma once

#include <chrono>

#include "adaprox/solvers.hpp"

namespace adaprox::detail {

// Shared bookkeeping for the solver loops: counters relative to the run
// start, stopping checks and record emission.
class TraceBuilder {
 public:
  TraceBuilder(const CompositeProblem& prob, const StoppingRule& stop, const RunOptions& opts, std::string solver)
      : prob_(prob),
        stop_(stop),
        opts_(opts),
        start_calls_(prob.f.op().total_count()),
        start_time_(std::chrono::steady_clock::now()) {
    stop_.validate();
    if (stop_.gap_threshold && !prob_.certificate)
      throw std::invalid_argument("gap threshold requires a problem certificate");
    trace_.solver = std::move(solver);
  }

  std::uint64_t calls() const { return prob_.f.op().total_count() - start_calls_; }

  std::uint64_t f_calls = 0;
  std::uint64_t grad_calls = 0;

  TraceRecord& push(const Vector& x, double cost, double gamma, double residual) {
    TraceRecord r;
    r.iter = trace_.records.size();
    r.a_calls = calls();
    r.f_calls = f_calls;
    r.grad_calls = grad_calls;
    r.cost = cost;
    if (prob_.certificate) r.gap = cost - prob_.certificate->phi_star;
    r.gamma = gamma;
    r.residual = residual;
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_time_).count();
    trace_.records.push_back(r);
    if (opts_.keep_iterates) trace_.iterates.push_back(x);
    trace_.final_iterate = x;
    return trace_.records.back();
  }

  // Checked after each record. `fixed_point_residual` is NaN when the solver
  // has no free gradient at the reported point.
  bool should_stop(double fixed_point_residual = kNaN) {
    const TraceRecord& r = trace_.records.back();
    if (stop_.gap_threshold && r.gap <= *stop_.gap_threshold) return finish(StopReason::gap);
    if (stop_.fixed_point_threshold && fixed_point_residual <= *stop_.fixed_point_threshold)
      return finish(StopReason::fixed_point);
    if (stop_.max_operator_calls && r.a_calls >= *stop_.max_operator_calls) return finish(StopReason::budget);
    if (stop_.max_iterations && r.iter >= *stop_.max_iterations) return finish(StopReason::iteration_limit);
    return false;
  }

  bool finish(StopReason reason) {
    trace_.stop_reason = reason;
    return true;
  }

  SolverTrace& trace() { return trace_; }
  SolverTrace take() { return std::move(trace_); }

 private:
  const CompositeProblem& prob_;
  StoppingRule stop_;
  RunOptions opts_;
  std::uint64_t start_calls_;
  std::chrono::steady_clock::time_point start_time_;
  SolverTrace trace_;
};

inline double fixed_point_residual(const CompositeProblem& prob, const Vector& x, const Vector& grad) {
  return (x - prob.g.prox(1.0, x - grad)).norm();
}

}  // namespace adaprox::detail
