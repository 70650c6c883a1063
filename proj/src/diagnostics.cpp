#include "adaprox/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scaled_margin(double margin, double scale, double rel_tol) {
  return margin + rel_tol * std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace

HolderEstimates estimates(const Vector& x_prev, const Vector& x_cur, const Vector& g_prev, const Vector& g_cur,
                          double gamma, double nu) {
  if (!(gamma > 0.0)) throw std::invalid_argument("estimates: gamma must be > 0");
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("estimates: nu must lie in (0, 1]");
  HolderEstimates h;
  h.nu = nu;
  const Vector dx = x_cur - x_prev;
  const double n = dx.norm();
  if (n == 0.0) return h;
  const Vector dg = g_cur - g_prev;
  const double inner = dx.dot(dg);
  const double dgn = dg.norm();
  const double n_1mnu = std::pow(n, 1.0 - nu);
  h.ell = inner / (n * n);
  h.lip = dgn / n;
  h.lambda = gamma / n_1mnu;
  h.ell_nu = inner / std::pow(n, 1.0 + nu);
  h.lip_nu = dgn / std::pow(n, nu);
  h.m_direct = (dx - gamma * dg).norm() / n;
  h.m_formula = std::sqrt(std::max(0.0, 1.0 + gamma * gamma * h.lip * h.lip - 2.0 * gamma * h.ell));
  h.m_nu = h.m_direct * n_1mnu;
  h.m_nu_bound = (1.0 + h.lambda * h.lip_nu) * n_1mnu;
  return h;
}

double rho_max(double q, double gamma0, double gamma_minus1) {
  return std::max(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / q)), gamma0 / gamma_minus1);
}

double AdaPGPath::rho_max() const { return adaprox::rho_max(q, gamma(0), gamma(-1)); }

AdaPGPath reconstruct_path(const SolverTrace& trace, const CompositeProblem& prob) {
  if (!trace.x_init || std::isnan(trace.gamma_init))
    throw std::invalid_argument("reconstruct_path: not an adaPG trace");
  if (trace.iterates.size() != trace.records.size() || trace.records.empty())
    throw std::invalid_argument("reconstruct_path: trace was recorded without iterates");
  const CompositeProblem local = prob.with_fresh_operator();
  AdaPGPath path;
  path.q = trace.q;
  auto add = [&](const Vector& x, double gamma) {
    const LossEval e = local.f.value_grad(x);
    path.points.push_back(x);
    path.grads.push_back(e.grad);
    path.gammas.push_back(gamma);
    path.phis.push_back(e.value + local.g.value(x));
  };
  add(*trace.x_init, trace.gamma_init);
  for (std::size_t k = 0; k < trace.records.size(); ++k) add(trace.iterates[k], trace.records[k].gamma);
  return path;
}

LyapunovSeries lyapunov_series(const AdaPGPath& path, const Certificate& cert) {
  LyapunovSeries s;
  const double q = path.q;
  const long K = path.last();
  s.rho_max = path.rho_max();
  s.gap_init = path.phi(-1) - cert.phi_star;
  auto gap = [&](long k) { return path.phi(k) - cert.phi_star; };
  for (long k = 0; k <= K; ++k) {
    s.gaps.push_back(gap(k));
    const double u = 0.5 * (path.x(k) - cert.x_star).squaredNorm() + 0.5 * (path.x(k) - path.x(k - 1)).squaredNorm() +
                     path.gamma(k) * (1.0 + q * path.rho(k)) * gap(k - 1);
    s.u.push_back(u);
  }
  for (long k = 0; k < K; ++k) {
    const LipschitzEstimates est = local_lipschitz(path.x(k - 1), path.x(k), path.g(k - 1), path.g(k));
    const double gk = path.gamma(k);
    const double rho_k = path.rho(k);
    const double rho_n = path.rho(k + 1);
    const double bracket = gk * gk * est.lip * est.lip - (2.0 - q) * gk * est.ell + 1.0 - q;
    const double dx2 = (path.x(k) - path.x(k - 1)).squaredNorm();
    const auto i = static_cast<std::size_t>(k);
    s.slack.push_back(s.u[i] - s.u[i + 1] - gk * (1.0 + q * rho_k - q * rho_n * rho_n) * gap(k - 1) -
                      (0.5 - rho_n * rho_n * bracket) * dx2);
    s.branches.push_back(adapg_stepsize_choice(gk, path.gamma(k - 1), est.ell, est.lip, q).branch);
  }
  return s;
}

LyapunovSeries lyapunov_series(const SolverTrace& trace, const CompositeProblem& prob, double q) {
  if (!prob.certificate) throw std::invalid_argument("lyapunov_series: problem has no certificate");
  AdaPGPath path = reconstruct_path(trace, prob);
  path.q = q;
  return lyapunov_series(path, *prob.certificate);
}

std::vector<GapBound> min_gap_bound_series(const AdaPGPath& path, const LyapunovSeries& series) {
  std::vector<GapBound> out;
  const long K_last = path.last();
  double best = series.gaps.empty() ? kInf : series.gaps[0];
  double gamma_sum = path.gamma(1 <= K_last ? 1 : 0);
  for (long K = 1; K + 1 <= K_last; ++K) {
    best = std::min(best, series.gaps[static_cast<std::size_t>(K)]);
    gamma_sum += path.gamma(K + 1);
    out.push_back({best, series.u[0] / gamma_sum});
  }
  return out;
}

GapBound min_gap_bound(const SolverTrace& trace, const CompositeProblem& prob) {
  if (!prob.certificate) throw std::invalid_argument("min_gap_bound: problem has no certificate");
  AdaPGPath path = reconstruct_path(trace, prob);
  const LyapunovSeries s = lyapunov_series(path, *prob.certificate);
  const auto series = min_gap_bound_series(path, s);
  if (!series.empty()) return series.back();
  return {*std::min_element(s.gaps.begin(), s.gaps.end()), kInf};
}

double rate_constant(double q, double nu, double rho_max) {
  return std::sqrt(2.0) * std::pow(std::sqrt(q), nu) * std::pow(std::sqrt(2.0) * rho_max + 1.0, 1.0 - nu);
}

RateEnvelope rate_envelope(const AdaPGPath& path, const LyapunovSeries& series, double nu, double lip_holder) {
  RateEnvelope env;
  const double u0 = series.u.at(0);
  const double c = rate_constant(path.q, nu, series.rho_max);
  const double gamma0 = path.gamma(0);
  double best = kInf;
  for (std::size_t K = 0; K < series.gaps.size(); ++K) {
    best = std::min(best, series.gaps[K]);
    const double k1 = static_cast<double>(K + 1);
    env.best_gap.push_back(best);
    env.bound.push_back(
        std::max(u0 / (gamma0 * k1), c * std::pow(u0, (1.0 + nu) / 2.0) * lip_holder / std::pow(k1, nu)));
  }
  return env;
}

RateEnvelope rate_envelope(const SolverTrace& trace, const CompositeProblem& prob, double q, double nu,
                           double lip_holder) {
  if (!prob.certificate) throw std::invalid_argument("rate_envelope: problem has no certificate");
  AdaPGPath path = reconstruct_path(trace, prob);
  path.q = q;
  return rate_envelope(path, lyapunov_series(path, *prob.certificate), nu, lip_holder);
}

void CheckResult::merge(const CheckResult& other) {
  checked += other.checked;
  violations += other.violations;
  worst = std::min(worst, other.worst);
  ok = ok && other.ok;
}

CheckResult check_lyapunov_descent(const LyapunovSeries& s, double tol) {
  CheckResult r{"lyapunov_descent"};
  for (std::size_t k = 0; k + 1 < s.u.size(); ++k) r.record(s.u[k] + tol - s.u[k + 1]);
  return r;
}

CheckResult check_descent_slack(const LyapunovSeries& s, double tol) {
  CheckResult r{"descent_slack"};
  for (double v : s.slack) r.record(v + tol);
  return r;
}

CheckResult check_min_gap(const AdaPGPath& path, const LyapunovSeries& s) {
  CheckResult r{"min_gap_bound"};
  for (const GapBound& b : min_gap_bound_series(path, s)) r.record(scaled_margin(b.rhs - b.lhs, b.rhs, 1e-12));
  return r;
}

CheckResult check_ratio_cap(const AdaPGPath& path, double rel_tol) {
  CheckResult r{"ratio_cap"};
  const double cap = path.rho_max();
  for (long k = 1; k <= path.last(); ++k) r.record(scaled_margin(cap - path.rho(k), cap, rel_tol));
  return r;
}

CheckResult check_k2_bound(const AdaPGPath& path, double nu, double rel_tol) {
  CheckResult r{"k2_lambda_bound"};
  const double cap = path.rho_max();
  for (long k = 0; k < path.last(); ++k) {
    const double gk = path.gamma(k);
    const HolderEstimates h = estimates(path.x(k - 1), path.x(k), path.g(k - 1), path.g(k), gk, nu);
    const auto choice = adapg_stepsize_choice(gk, path.gamma(k - 1), h.ell, h.lip, path.q);
    if (choice.branch != StepBranch::second || h.lip_nu == 0.0) continue;
    const double lam_floor = 1.0 / (std::sqrt(2.0) * h.lip_nu * cap);
    r.record(scaled_margin(h.lambda - lam_floor, lam_floor, rel_tol));
    const double rho_floor = 1.0 / (std::sqrt(2.0) * h.lambda * h.lip_nu);
    r.record(scaled_margin(path.rho(k + 1) - rho_floor, rho_floor, rel_tol));
  }
  return r;
}

CheckResult check_fne(const AdaPGPath& path, double rel_tol) {
  CheckResult r{"fne_inequality"};
  for (long k = 0; k < path.last(); ++k) {
    const double gk = path.gamma(k);
    const double rho = path.rho(k + 1);
    const Vector hd = (path.x(k - 1) - gk * path.g(k - 1)) - (path.x(k) - gk * path.g(k));
    const Vector step = path.x(k) - path.x(k + 1);
    const double left = step.squaredNorm() / rho;
    const double mid = hd.dot(step);
    const double right = rho * hd.squaredNorm();
    const double scale = std::max({left, std::abs(mid), right});
    r.record(scaled_margin(mid - left, scale, rel_tol));
    r.record(scaled_margin(right - mid, scale, rel_tol));
  }
  return r;
}

CheckResult check_residual_ratio(const AdaPGPath& path, double abs_tol) {
  CheckResult r{"residual_ratio"};
  for (long k = 0; k < path.last(); ++k) {
    const double gk = path.gamma(k);
    const HolderEstimates h = estimates(path.x(k - 1), path.x(k), path.g(k - 1), path.g(k), gk, 1.0);
    const double lhs = (path.x(k + 1) - path.x(k)).norm();
    const double rhs = path.rho(k + 1) * h.m_direct * (path.x(k - 1) - path.x(k)).norm();
    r.record(rhs + abs_tol - lhs);
  }
  return r;
}

CheckResult check_rate_envelope(const RateEnvelope& env, double rel_tol) {
  CheckResult r{"rate_envelope"};
  for (std::size_t K = 0; K < env.bound.size(); ++K)
    r.record(scaled_margin(env.bound[K] - env.best_gap[K], env.bound[K], rel_tol));
  return r;
}

}  // namespace adaprox
