#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adaprox/data.hpp"
#include "adaprox/solvers.hpp"

using namespace adaprox;
using doctest::Approx;

namespace {

// f = 1/2 x^2 (p = 2) in one dimension, g = 0, minimum 0 at 0.
CompositeProblem quadratic_1d(Regularizer g = Regularizer::zero()) {
  auto op = std::make_shared<CountedOperator>(DenseMatrix::Identity(1, 1));
  return CompositeProblem{SmoothLoss(op, PNormResidual{2.0, Vector::Zero(1)}), g, Certificate{Vector::Zero(1), 0.0}};
}

CompositeProblem power_1d(double p) {
  auto op = std::make_shared<CountedOperator>(DenseMatrix::Identity(1, 1));
  return CompositeProblem{SmoothLoss(op, PNormResidual{p, Vector::Zero(1)}), Regularizer::zero(),
                          Certificate{Vector::Zero(1), 0.0}};
}

StoppingRule iterations(std::size_t k) {
  StoppingRule s;
  s.max_iterations = k;
  return s;
}

void check_deltas(const SolverTrace& t, long (*expected)(const TraceRecord&)) {
  for (std::size_t k = 1; k < t.records.size(); ++k)
    CHECK(static_cast<long>(t.records[k].a_calls - t.records[k - 1].a_calls) == expected(t.records[k]));
}

}  // namespace

TEST_CASE("adaPG stepsize examples") {
  CHECK(adapg_stepsize(1, 1, 0, 0, 1) == Approx(std::sqrt(2.0)));
  CHECK(adapg_stepsize(1, 1, 1, 2, 1) == Approx(1.0 / std::sqrt(6.0)));
  CHECK(adapg_stepsize(1, 1, 1, 1, 2) == Approx(std::sqrt(1.5)));
  CHECK(adapg_stepsize_choice(1, 1, 0, 0, 1).branch == StepBranch::first);
  CHECK(adapg_stepsize_choice(1, 1, 1, 2, 1).branch == StepBranch::second);
  CHECK_THROWS(adapg_stepsize(0, 1, 0, 0, 1));
  CHECK_THROWS(adapg_stepsize(1, -1, 0, 0, 1));
}

TEST_CASE("adaPG stepsize tie counts as second branch") {
  // q = 1, gamma_k = gamma_{k-1} = 1: first term sqrt2; bracket L^2 - ell = 1/4 gives 1/sqrt(1/2) = sqrt2
  const auto c = adapg_stepsize_choice(1.0, 1.0, 0.0, 0.5, 1.0);
  CHECK(c.branch == StepBranch::second);
  CHECK(c.gamma == Approx(std::sqrt(2.0)));
}

TEST_CASE("local estimates use 0/0 = 0") {
  const Vector x = Vector::Ones(2);
  const auto e = local_lipschitz(x, x, Vector::Zero(2), Vector::Ones(2));
  CHECK(e.ell == 0.0);
  CHECK(e.lip == 0.0);
}

TEST_CASE("adaPG two iterations by hand on 1/2 x^2") {
  const CompositeProblem prob = quadratic_1d();
  AdaPGConfig cfg;
  cfg.q = 1.0;
  cfg.gamma0 = 0.5;
  cfg.gamma_minus1 = 0.5;
  cfg.x_minus1 = Vector::Constant(1, 1.0);
  RunOptions opts;
  opts.keep_iterates = true;
  const SolverTrace t = adapg_run(prob, cfg, iterations(2), opts);
  REQUIRE(t.records.size() == 3);
  CHECK(t.iterates[0][0] == Approx(0.5));
  const double g1 = 0.5 * std::sqrt(2.0);
  CHECK(t.records[1].gamma == Approx(g1));
  CHECK(t.records[1].ell == Approx(1.0));
  CHECK(t.records[1].lip == Approx(1.0));
  CHECK(t.records[1].branch == StepBranch::first);
  CHECK(t.iterates[1][0] == Approx((1.0 - g1) * 0.5));
  CHECK(t.records[1].cost == Approx(0.5 * std::pow((1.0 - g1) * 0.5, 2)));
  CHECK(t.records[1].gap == Approx(t.records[1].cost));
  CHECK(t.stop_reason == StopReason::iteration_limit);
  CHECK(t.x_init.has_value());
  CHECK(t.gamma_init == 0.5);
}

TEST_CASE("adaPG stationary start stops immediately") {
  const CompositeProblem prob = quadratic_1d();
  AdaPGConfig cfg;
  cfg.x_minus1 = Vector::Zero(1);
  StoppingRule stop;
  stop.max_operator_calls = 1000;
  const SolverTrace t = adapg_run(prob, cfg, stop);
  CHECK(t.records.size() == 1);
  CHECK(t.stop_reason == StopReason::exact_fixed_point);
  CHECK(t.final_iterate == Vector::Zero(1));
  CHECK(t.records[0].a_calls == 2);
}

TEST_CASE("adaPG rejects bad configurations") {
  const CompositeProblem prob = quadratic_1d();
  AdaPGConfig cfg;
  cfg.x_minus1 = Vector::Ones(1);
  cfg.q = 2.5;
  CHECK_THROWS(adapg_run(prob, cfg, iterations(1)));
  cfg.q = 1.5;
  cfg.gamma0 = 0.5;
  cfg.gamma_minus1 = 1.0;
  CHECK_THROWS(adapg_run(prob, cfg, iterations(1)));
  cfg.gamma0 = cfg.gamma_minus1 = 1.0;
  cfg.x_minus1 = Vector::Ones(2);
  CHECK_THROWS_AS(adapg_run(prob, cfg, iterations(1)), DimensionError);
  cfg.x_minus1 = Vector::Ones(1);
  CHECK_THROWS(adapg_run(prob, cfg, StoppingRule{}));
}

TEST_CASE("adaPG on generated Lasso: two calls per iteration, gap below 1e-6") {
  const auto inst = generate_pnorm_lasso(100, 300, 30, 1.5, 1.0, 50);
  const CompositeProblem prob = inst.to_problem();
  const Vector x0 = Vector::Zero(300);
  const auto init = tune_initial_stepsize(prob.with_fresh_operator(), x0, 1.0, 1.5);
  AdaPGConfig cfg;
  cfg.gamma0 = init.gamma0;
  cfg.gamma_minus1 = init.gamma_minus1;
  cfg.x_minus1 = x0;
  StoppingRule stop;
  stop.max_operator_calls = 20000;
  stop.gap_threshold = 1e-6;
  const SolverTrace t = adapg_run(prob, cfg, stop);
  CHECK(t.stop_reason == StopReason::gap);
  CHECK(t.records.back().gap <= 1e-6);
  CHECK(t.records.back().a_calls == prob.f.op().total_count());
  check_deltas(t, [](const TraceRecord&) { return 2L; });
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    CHECK(t.records[k].iter == k);
    CHECK(t.records[k].f_calls == t.records[k - 1].f_calls + 1);
  }
}

TEST_CASE("fixed-point stopping rule") {
  const CompositeProblem prob = quadratic_1d();
  AdaPGConfig cfg;
  cfg.x_minus1 = Vector::Constant(1, 3.0);
  StoppingRule stop;
  stop.fixed_point_threshold = 1e-8;
  stop.max_iterations = 10000;
  const SolverTrace t = adapg_run(prob, cfg, stop);
  CHECK((t.stop_reason == StopReason::fixed_point || t.stop_reason == StopReason::exact_fixed_point));
  CHECK(std::abs(t.final_iterate[0]) <= 1e-8);
}

TEST_CASE("gap threshold needs a certificate") {
  CompositeProblem prob = quadratic_1d();
  prob.certificate.reset();
  AdaPGConfig cfg;
  cfg.x_minus1 = Vector::Ones(1);
  StoppingRule stop;
  stop.gap_threshold = 1e-3;
  CHECK_THROWS(adapg_run(prob, cfg, stop));
}

TEST_CASE("tune_initial_stepsize examples") {
  const CompositeProblem prob = quadratic_1d();
  const auto s = tune_initial_stepsize(prob, Vector::Constant(1, 1.0), 10.0, 1.5);
  CHECK(s.gamma0 == Approx(1.0));
  CHECK(s.gamma_minus1 == Approx(1.0));
  // guess already 1/L: no repetition (two evaluations only)
  const CompositeProblem p2 = quadratic_1d();
  tune_initial_stepsize(p2, Vector::Constant(1, 1.0), 1.0, 1.5);
  CHECK(p2.f.op().total_count() == 4);
  // large guess on a curved problem triggers one repetition
  const CompositeProblem p3 = power_1d(1.5);
  const auto s3 = tune_initial_stepsize(p3, Vector::Constant(1, 1.0), 1000.0, 1.5);
  CHECK(p3.f.op().total_count() == 6);
  CHECK(s3.gamma0 > 0.0);
  CHECK(s3.gamma_minus1 <= s3.gamma0);
  // degenerate step: minimiser as start
  const auto s4 = tune_initial_stepsize(prob, Vector::Zero(1), 3.0, 1.0);
  CHECK(s4.gamma0 == 3.0);
  CHECK(s4.gamma_minus1 == 3.0);
  CHECK_THROWS(tune_initial_stepsize(prob, Vector::Zero(1), 0.0, 1.0));
}

TEST_CASE("NUPG trial enumeration on 1/2 x^2") {
  const CompositeProblem prob = quadratic_1d();
  NUPGConfig cfg;
  cfg.gamma0 = 4.0;
  cfg.x0 = Vector::Constant(1, 1.0);
  const SolverTrace t = nupg_run(prob, cfg, iterations(1));
  REQUIRE(t.records.size() == 2);
  CHECK(t.records[1].ls_trials == 4);  // 8, 4, 2, 1
  CHECK(t.records[1].gamma == 1.0);
  CHECK(t.final_iterate[0] == 0.0);
  CHECK(t.records[1].a_calls - t.records[0].a_calls == 5);
}

TEST_CASE("NUPG accounting 1 + #LS and convergence on Lasso") {
  const auto inst = generate_pnorm_lasso(60, 120, 10, 1.7, 1.0, 3);
  const CompositeProblem prob = inst.to_problem();
  NUPGConfig cfg;
  cfg.x0 = Vector::Zero(120);
  cfg.gamma0 = 0.01;
  StoppingRule stop;
  stop.max_operator_calls = 6000;
  const SolverTrace t = nupg_run(prob, cfg, stop);
  check_deltas(t, [](const TraceRecord& r) { return 1L + r.ls_trials; });
  CHECK(t.records.back().gap < 1e-4);
  CHECK(t.stop_reason == StopReason::budget);
  CHECK(t.records.back().a_calls < 6000 + 1 + 61);
}

TEST_CASE("NUPG parameter validation") {
  const CompositeProblem prob = quadratic_1d();
  NUPGConfig cfg;
  cfg.x0 = Vector::Ones(1);
  cfg.eta = 1.0;
  CHECK_THROWS(nupg_run(prob, cfg, iterations(1)));
  cfg.eta = 0.5;
  cfg.epsilon = 0.0;
  CHECK_THROWS(fnupg_run(prob, cfg, iterations(1)));
}

TEST_CASE("F-NUPG on 1/2 x^2 settles near L = 1; both NUPG variants solve a Lasso") {
  const CompositeProblem prob = quadratic_1d();
  NUPGConfig cfg;
  cfg.x0 = Vector::Constant(1, 5.0);
  cfg.gamma0 = 0.1;
  const SolverTrace t = fnupg_run(prob, cfg, iterations(40));
  CHECK(t.records.back().lip <= 4.0);
  CHECK(t.records.back().lip >= 0.25);
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    CHECK(t.records[k].a_calls - t.records[k - 1].a_calls == 1 + 2 * static_cast<std::uint64_t>(t.records[k].ls_trials));
  }

  const auto inst = generate_pnorm_lasso(60, 120, 10, 1.9, 1.0, 4);
  const CompositeProblem lasso = inst.to_problem();
  NUPGConfig c2;
  c2.x0 = Vector::Zero(120);
  c2.gamma0 = 0.01;
  StoppingRule stop;
  stop.max_operator_calls = 4000;
  const double fast = fnupg_run(lasso, c2, stop).records.back().gap;
  const double slow = nupg_run(lasso.with_fresh_operator(), c2, stop).records.back().gap;
  CHECK(fast < 1e-3);
  CHECK(slow < 1e-3);
}

TEST_CASE("F-NUPG stationary start keeps the iterate") {
  const CompositeProblem prob = quadratic_1d();
  NUPGConfig cfg;
  cfg.x0 = Vector::Zero(1);
  const SolverTrace t = fnupg_run(prob, cfg, iterations(5));
  for (std::size_t k = 0; k < t.records.size(); ++k) CHECK(t.records[k].cost == 0.0);
  CHECK(t.final_iterate == Vector::Zero(1));
}

TEST_CASE("AC-FGM helpers") {
  const double beta = kDefaultAcfgmBeta;
  CHECK(beta == Approx(1.0 - std::sqrt(3.0) / 2.0));
  CHECK(acfgm::next_tau(2.0, beta / 2.0, 1.0, 0.0, beta) == 2.5);
  CHECK(acfgm::first_gamma(1.0, beta) == Approx(0.5 * (beta / (4 * (1 - beta)) + 1.0 / 3.0)));
  CHECK(acfgm::first_estimate(0.0, 1.0, 1e-12) == 0.0);
  CHECK(acfgm::first_estimate(2.0, 2.0, 0.0) == Approx(1.0));
  CHECK(acfgm::estimate(1.0, 1.0, 0.5, 0.0, 0.0, 2.0) == Approx(1.0));
  CHECK_THROWS_AS(acfgm::estimate(1.0, 0.0, 0.0, 0.0, 0.0, 2.0), NumericalError);
  CHECK(acfgm::next_gamma(0.0, 2.0, 1.0, 1.0, beta) == Approx(std::min(0.5, beta * 2.0 / 4.0)));
}

TEST_CASE("AC-FGM on 1/2 x^2: c_k tends to 1, converges, two calls per iteration") {
  const CompositeProblem prob = quadratic_1d();
  ACFGMConfig cfg;
  cfg.x0 = Vector::Constant(1, 1.0);
  cfg.gamma1 = 0.5;
  const SolverTrace t = acfgm_run(prob, cfg, iterations(60));
  CHECK(t.records[1].tau == 0.0);
  CHECK(t.records[1].beta == 0.0);
  CHECK(t.records[2].tau == 2.0);
  CHECK(t.records[2].gamma == Approx(cfg.beta / (2.0 * t.records[1].lip)));
  for (std::size_t k = 2; k < t.records.size(); ++k) {
    if (t.stop_reason == StopReason::curvature_breakdown && k + 1 == t.records.size()) break;
    CHECK(t.records[k].lip == Approx(1.0).epsilon(1e-6));
  }
  CHECK(t.records.back().gap < 1e-3);
  CHECK(t.records.back().gap < 1e-3 * t.records.front().gap);
  check_deltas(t, [](const TraceRecord&) { return 2L; });
}

TEST_CASE("AC-FGM rejects beta outside (0, 4/7]") {
  const CompositeProblem prob = quadratic_1d();
  ACFGMConfig cfg;
  cfg.x0 = Vector::Ones(1);
  cfg.beta = 0.6;
  CHECK_THROWS(acfgm_run(prob, cfg, iterations(1)));
  cfg.beta = -0.1;
  CHECK_THROWS(acfgm_run(prob, cfg, iterations(1)));
}

TEST_CASE("runs are deterministic") {
  const auto inst = generate_pnorm_lasso(40, 80, 8, 1.5, 1.0, 9);
  const CompositeProblem prob = inst.to_problem();
  AdaPGConfig cfg;
  cfg.gamma0 = cfg.gamma_minus1 = 0.01;
  cfg.x_minus1 = Vector::Zero(80);
  const SolverTrace a = adapg_run(prob.with_fresh_operator(), cfg, iterations(200));
  const SolverTrace b = adapg_run(prob.with_fresh_operator(), cfg, iterations(200));
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].cost == b.records[k].cost);
    CHECK(a.records[k].gamma == b.records[k].gamma);
  }
  CHECK(a.final_iterate == b.final_iterate);
}

TEST_CASE("stop reason names") {
  CHECK(std::string(to_string(StopReason::budget)) == "budget");
  CHECK(std::string(to_string(StopReason::exact_fixed_point)) == "exact_fixed_point");
}
