#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adaprox/data.hpp"
#include "adaprox/diagnostics.hpp"

using namespace adaprox;
using doctest::Approx;

namespace {

CompositeProblem power_1d(double p) {
  auto op = std::make_shared<CountedOperator>(DenseMatrix::Identity(1, 1));
  return CompositeProblem{SmoothLoss(op, PNormResidual{p, Vector::Zero(1)}), Regularizer::zero(),
                          Certificate{Vector::Zero(1), 0.0}};
}

SolverTrace quad_run(std::size_t iters, double x_start = 1.0) {
  const CompositeProblem prob = power_1d(2.0);
  AdaPGConfig cfg;
  cfg.q = 1.0;
  cfg.gamma0 = 0.5;
  cfg.gamma_minus1 = 0.5;
  cfg.x_minus1 = Vector::Constant(1, x_start);
  StoppingRule stop;
  stop.max_iterations = iters;
  RunOptions opts;
  opts.keep_iterates = true;
  return adapg_run(prob, cfg, stop, opts);
}

SolverTrace lasso_run(const CompositeProblem& prob, double q, std::size_t iters) {
  const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(prob.dim()));
  const auto init = tune_initial_stepsize(prob.with_fresh_operator(), x0, 1.0, q);
  AdaPGConfig cfg;
  cfg.q = q;
  cfg.gamma0 = init.gamma0;
  cfg.gamma_minus1 = init.gamma_minus1;
  cfg.x_minus1 = x0;
  StoppingRule stop;
  stop.max_iterations = iters;
  RunOptions opts;
  opts.keep_iterates = true;
  return adapg_run(prob.with_fresh_operator(), cfg, stop, opts);
}

Vector one(double v) { return Vector::Constant(1, v); }

}  // namespace

TEST_CASE("estimates on the identity gradient") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100; ++t) {
    Vector a(3), b(3);
    for (auto& v : a) v = nd(rng);
    for (auto& v : b) v = nd(rng);
    const double gamma = 0.1 + t * 0.03;
    const auto h = estimates(a, b, a, b, gamma, 1.0);
    CHECK(h.ell == Approx(1.0));
    CHECK(h.lip == Approx(1.0));
    CHECK(h.m_direct == Approx(std::abs(1.0 - gamma)).epsilon(1e-9));
    CHECK(h.m_formula == Approx(std::abs(1.0 - gamma)).epsilon(1e-7));
  }
}

TEST_CASE("estimates at equal points are zero") {
  const auto h = estimates(one(2), one(2), one(1), one(3), 0.7, 0.5);
  CHECK(h.ell == 0.0);
  CHECK(h.lip == 0.0);
  CHECK(h.lambda == 0.0);
  CHECK_THROWS(estimates(one(0), one(1), one(0), one(1), 0.0, 1.0));
  CHECK_THROWS(estimates(one(0), one(1), one(0), one(1), 1.0, 0.0));
}

TEST_CASE("estimates for |x|^1.5/1.5 from 0 to 1") {
  const auto h = estimates(one(0), one(1), one(0), one(1), 0.3, 0.5);
  CHECK(h.ell == Approx(1.0));
  CHECK(h.lip == Approx(1.0));
  CHECK(h.lambda == Approx(0.3));
  CHECK(h.ell_nu == Approx(1.0));
  CHECK(h.lip_nu == Approx(1.0));
}

TEST_CASE("scaling identities and the M^nu bound") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double p : {1.3, 1.6, 1.9}) {
    const CompositeProblem prob = power_1d(p);
    for (int t = 0; t < 2000; ++t) {
      const Vector a = one(u(rng)), b = one(u(rng));
      const double gamma = std::pow(10.0, u(rng) / 2.0);
      const auto ga = prob.f.value_grad(a).grad, gb = prob.f.value_grad(b).grad;
      const auto h = estimates(a, b, ga, gb, gamma, p - 1.0);
      if (a == b) continue;
      CHECK(h.lambda * h.lip_nu == Approx(gamma * h.lip).epsilon(1e-12));
      CHECK(h.lambda * h.ell_nu == Approx(gamma * h.ell).epsilon(1e-12));
      CHECK(h.ell <= h.lip * (1 + 1e-14));
      CHECK(h.m_nu <= h.m_nu_bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("Lyapunov values by hand on the two-step quadratic run") {
  const SolverTrace t = quad_run(2);
  const CompositeProblem prob = power_1d(2.0);
  const LyapunovSeries s = lyapunov_series(t, prob, 1.0);
  REQUIRE(s.u.size() == 3);
  // x^{-1} = 1, x^0 = 0.5, gamma_0 = gamma_{-1} = 0.5, P_{-1} = 0.5
  CHECK(s.gap_init == Approx(0.5));
  CHECK(s.u[0] == Approx(0.125 + 0.125 + 0.5 * 2.0 * 0.5));
  CHECK(s.u[1] <= s.u[0]);
  CHECK(check_lyapunov_descent(s).ok);
  CHECK(check_descent_slack(s).ok);
  CHECK(s.rho_max == Approx(0.5 * (1 + std::sqrt(5.0))));
}

TEST_CASE("min-gap bound by hand at K = 2") {
  const SolverTrace t = quad_run(4);
  const CompositeProblem prob = power_1d(2.0);
  const AdaPGPath path = reconstruct_path(t, prob);
  const LyapunovSeries s = lyapunov_series(path, *prob.certificate);
  const auto series = min_gap_bound_series(path, s);
  REQUIRE(series.size() >= 2);
  double xs[4];
  for (int k = 0; k < 4; ++k) xs[k] = t.iterates[static_cast<std::size_t>(k)][0];
  const double lhs = std::min({0.5 * xs[0] * xs[0], 0.5 * xs[1] * xs[1], 0.5 * xs[2] * xs[2]});
  const double rhs = s.u[0] / (t.records[1].gamma + t.records[2].gamma + t.records[3].gamma);
  CHECK(series[1].lhs == Approx(lhs));
  CHECK(series[1].rhs == Approx(rhs));
  CHECK(series[1].lhs <= series[1].rhs);
  CHECK(check_min_gap(path, s).ok);
}

TEST_CASE("fixed-point trace has vanishing Lyapunov values") {
  const SolverTrace t = quad_run(5, 0.0);
  const CompositeProblem prob = power_1d(2.0);
  const LyapunovSeries s = lyapunov_series(t, prob, 1.0);
  for (double u : s.u) CHECK(u == 0.0);
  const GapBound g = min_gap_bound(t, prob);
  CHECK(g.lhs == 0.0);
  CHECK(g.lhs <= g.rhs);
}

TEST_CASE("checks flag violations") {
  LyapunovSeries s;
  s.u = {1.0, 0.5, 0.6};
  s.slack = {0.1, -1e-6};
  CHECK_FALSE(check_lyapunov_descent(s).ok);
  CHECK(check_lyapunov_descent(s).violations == 1);
  CHECK_FALSE(check_descent_slack(s).ok);
  RateEnvelope env;
  env.bound = {1.0, 0.5};
  env.best_gap = {0.5, 0.6};
  CHECK_FALSE(check_rate_envelope(env).ok);
  CheckResult a, b;
  a.record(1.0);
  b.record(-2.0);
  a.merge(b);
  CHECK_FALSE(a.ok);
  CHECK(a.checked == 2);
  CHECK(a.worst == -2.0);
}

TEST_CASE("rate constant collapses at nu = 1") {
  CHECK(rate_constant(1.5, 1.0, 3.0) == Approx(std::sqrt(2.0) * std::sqrt(1.5)));
  CHECK(rate_constant(1.0, 0.5, 2.0) == Approx(std::sqrt(2.0) * std::sqrt(2.0 * std::sqrt(2.0) + 1.0)));
  const SolverTrace t = quad_run(50, 3.0);
  const CompositeProblem prob = power_1d(2.0);
  const RateEnvelope env = rate_envelope(t, prob, 1.0, 1.0, 1.0);
  CHECK(check_rate_envelope(env).ok);
}

TEST_CASE("rate envelope on |x|^p/p") {
  for (double p : {1.3, 1.5, 1.9}) {
    const CompositeProblem prob = power_1d(p);
    AdaPGConfig cfg;
    cfg.q = 1.5;
    cfg.x_minus1 = one(0.9);
    const auto init = tune_initial_stepsize(prob.with_fresh_operator(), cfg.x_minus1, 1.0, cfg.q);
    cfg.gamma0 = init.gamma0;
    cfg.gamma_minus1 = init.gamma_minus1;
    StoppingRule stop;
    stop.max_iterations = 2000;
    RunOptions opts;
    opts.keep_iterates = true;
    const SolverTrace t = adapg_run(prob, cfg, stop, opts);
    const RateEnvelope env = rate_envelope(t, prob, 1.5, p - 1.0, std::pow(2.0, 2.0 - p));
    CHECK(check_rate_envelope(env).ok);
    const AdaPGPath path = reconstruct_path(t, prob);
    CHECK(check_k2_bound(path, p - 1.0).ok);
    CHECK(check_ratio_cap(path).ok);
  }
}

TEST_CASE("path checks on a generated Lasso run") {
  const auto inst = generate_pnorm_lasso(60, 150, 12, 1.6, 1.0, 21);
  const CompositeProblem prob = inst.to_problem();
  for (double q : {1.0, 1.5, 2.0}) {
    const SolverTrace t = lasso_run(prob, q, 400);
    const AdaPGPath path = reconstruct_path(t, prob);
    const LyapunovSeries s = lyapunov_series(path, *prob.certificate);
    CHECK(check_lyapunov_descent(s).ok);
    CHECK(check_descent_slack(s).ok);
    CHECK(check_min_gap(path, s).ok);
    CHECK(check_ratio_cap(path).ok);
    CHECK(check_residual_ratio(path).ok);
    CHECK(s.branches.size() == s.slack.size());
    // the lower FNE bound is tight once the support settles; keep clear of roundoff
    CHECK(check_fne(reconstruct_path(lasso_run(prob, q, 100), prob)).ok);
  }
}

TEST_CASE("path reconstruction needs an adaPG trace with iterates") {
  const CompositeProblem prob = power_1d(2.0);
  AdaPGConfig cfg;
  cfg.x_minus1 = one(1.0);
  StoppingRule stop;
  stop.max_iterations = 3;
  const SolverTrace no_iterates = adapg_run(prob, cfg, stop);
  CHECK_THROWS(reconstruct_path(no_iterates, prob));
  NUPGConfig ncfg;
  ncfg.x0 = one(1.0);
  RunOptions opts;
  opts.keep_iterates = true;
  CHECK_THROWS(reconstruct_path(nupg_run(prob, ncfg, stop, opts), prob));
  CompositeProblem uncertified = prob.with_fresh_operator();
  uncertified.certificate.reset();
  CHECK_THROWS(lyapunov_series(quad_run(2), uncertified, 1.0));
}
