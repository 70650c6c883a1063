#include "adaprox/suites.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "adaprox/data.hpp"
#include "adaprox/diagnostics.hpp"
#include "adaprox/harness.hpp"

namespace adaprox {

namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct AdaPGRun {
  std::string label;
  double nu = 1.0;
  double lip_holder = 0.0;
  SolverTrace trace;
  AdaPGPath path;
  LyapunovSeries series;
};

AdaPGRun run_adapg_checked(const CompositeProblem& prob, double q, const Vector& x_init, std::size_t iters,
                           std::string label) {
  AdaPGRun out;
  out.label = std::move(label);
  const CompositeProblem local = prob.with_fresh_operator();
  const InitialStepsizes init = tune_initial_stepsize(local, x_init, 1.0, q);
  AdaPGConfig cfg;
  cfg.q = q;
  cfg.gamma0 = init.gamma0;
  cfg.gamma_minus1 = init.gamma_minus1;
  cfg.x_minus1 = x_init;
  StoppingRule stop;
  stop.max_iterations = iters;
  RunOptions opts;
  opts.keep_iterates = true;
  out.trace = adapg_run(local, cfg, stop, opts);
  out.path = reconstruct_path(out.trace, local);
  out.series = lyapunov_series(out.path, *local.certificate);
  return out;
}

struct LassoShape {
  std::size_t m, n, k;
};

std::vector<GeneratedInstance> suite_instances() {
  static const LassoShape shapes[] = {{60, 120, 12}, {100, 300, 30}, {150, 400, 40}, {200, 500, 50}};
  static const double powers[] = {1.2, 1.4, 1.5, 1.7, 1.9};
  std::vector<GeneratedInstance> out;
  for (int i = 0; i < 20; ++i) {
    const LassoShape& s = shapes[i % 4];
    out.push_back(generate_pnorm_lasso(s.m, s.n, s.k, powers[i % 5], i % 2 ? 1.0 : 0.5, 1000 + i));
  }
  return out;
}

const std::vector<AdaPGRun>& lasso_runs() {
  static const std::vector<AdaPGRun> runs = [] {
    std::vector<AdaPGRun> r;
    const auto inst = suite_instances();
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const CompositeProblem prob = inst[i].to_problem();
      const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(prob.dim()));
      for (double q : {1.0, 1.5, 2.0}) {
        std::ostringstream label;
        label << "lasso#" << i << " q=" << q;
        r.push_back(run_adapg_checked(prob, q, x0, 600, label.str()));
      }
    }
    return r;
  }();
  return runs;
}

CompositeProblem power_1d(double p) {
  DenseMatrix a(1, 1);
  a(0, 0) = 1.0;
  Vector b = Vector::Zero(1);
  auto op = std::make_shared<CountedOperator>(std::move(a));
  return CompositeProblem{SmoothLoss(op, PNormResidual{p, b}), Regularizer::zero(), Certificate{Vector::Zero(1), 0.0}};
}

const std::vector<AdaPGRun>& power_runs() {
  static const std::vector<AdaPGRun> runs = [] {
    std::vector<AdaPGRun> r;
    for (double p : {1.3, 1.5, 1.9}) {
      const CompositeProblem prob = power_1d(p);
      for (double q : {1.0, 1.5, 2.0}) {
        std::ostringstream label;
        label << "|x|^" << p << " q=" << q;
        AdaPGRun run = run_adapg_checked(prob, q, Vector::Constant(1, 0.9), 100000, label.str());
        run.nu = p - 1.0;
        run.lip_holder = std::pow(2.0, 2.0 - p);
        r.push_back(std::move(run));
      }
    }
    return r;
  }();
  return runs;
}

std::string describe(const CheckResult& c) {
  std::ostringstream os;
  os << c.checked << " checks, " << c.violations << " violations";
  if (c.violations) os << ", worst margin " << sci(c.worst);
  return os.str();
}

template <class F>
CriterionResult timed(int id, std::string title, F&& body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

// Small random problems of each loss family.
std::vector<std::pair<std::string, CompositeProblem>> family_problems(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto dense = [&](std::size_t m, std::size_t n) {
    DenseMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(rng);
    return a;
  };
  auto vec = [&](std::size_t m) {
    Vector v(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    return v;
  };
  auto labels = [&](std::size_t m) {
    Vector v(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng) > 0 ? 1.0 : -1.0;
    return v;
  };
  std::vector<std::pair<std::string, CompositeProblem>> out;
  {
    auto op = std::make_shared<CountedOperator>(dense(15, 8));
    out.emplace_back("pnorm", CompositeProblem{SmoothLoss(op, PNormResidual{1.5, vec(15)}), Regularizer::zero(), {}});
  }
  {
    auto op = std::make_shared<CountedOperator>(SparseMatrixCSR::from_dense(dense(20, 8)));
    out.emplace_back("power-hinge", CompositeProblem{SmoothLoss(op, PowerHinge{1.5, labels(20)}), Regularizer::zero(), {}});
  }
  {
    auto op = std::make_shared<CountedOperator>(dense(20, 8));
    out.emplace_back("logistic", CompositeProblem{SmoothLoss(op, Logistic{labels(20)}, 0.1, 1.5), Regularizer::zero(), {}});
  }
  {
    auto op = std::make_shared<CountedOperator>(dense(14, 8));
    Mixture mix{{{0, 6, 1.8}, {6, 10, 1.5}, {10, 14, 1.3}}, vec(14)};
    out.emplace_back("mixture", CompositeProblem{SmoothLoss(op, mix), Regularizer::zero(), {}});
  }
  return out;
}

// Keeps finite differences away from the kinks of the link functions.
bool smooth_enough(const CompositeProblem& prob, const Vector& x) {
  const Vector ax = prob.f.op().apply(x);
  const auto& link = prob.f.link();
  const double tol = 1e-3;
  if (const auto* pn = std::get_if<PNormResidual>(&link)) return ((ax - pn->b).array().abs() > tol).all();
  if (const auto* mx = std::get_if<Mixture>(&link)) return ((ax - mx->b).array().abs() > tol).all();
  if (const auto* h = std::get_if<PowerHinge>(&link))
    return ((1.0 - h->labels.array() * ax.array()).abs() > tol).all();
  if (std::holds_alternative<Logistic>(link)) return (x.array().abs() > tol).all();
  return true;
}

}  // namespace

CriterionResult check_forward_operator_identity() {
  return timed(1, "forward-operator identity M_k^2 = 1 + g^2 L^2 - 2 g ell", [](CriterionResult& r) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> lg(-3.0, 1.0);
    std::size_t total = 0, bad = 0;
    double worst = 0.0;
    for (auto& [name, prob] : family_problems(rng)) {
      const Eigen::Index n = static_cast<Eigen::Index>(prob.dim());
      for (int t = 0; t < 10000; ++t) {
        Vector x0(n), x1(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          x0[i] = nd(rng);
          x1[i] = x0[i] + std::pow(10.0, lg(rng)) * nd(rng);
        }
        const double gamma = std::pow(10.0, lg(rng));
        const Vector g0 = prob.f.value_grad(x0).grad;
        const Vector g1 = prob.f.value_grad(x1).grad;
        const HolderEstimates h = estimates(x0, x1, g0, g1, gamma, 1.0);
        const double direct2 = h.m_direct * h.m_direct;
        const double formula2 = 1.0 + gamma * gamma * h.lip * h.lip - 2.0 * gamma * h.ell;
        const double err = std::abs(direct2 - formula2) / (1.0 + direct2);
        worst = std::max(worst, err);
        ++total;
        if (err > 1e-9) ++bad;
      }
    }
    r.pass = bad == 0;
    r.detail = std::to_string(total) + " triples over 4 loss families, worst scaled error " + sci(worst) +
               (bad ? ", " + std::to_string(bad) + " above 1e-9" : "");
  });
}

CriterionResult check_lyapunov_decrease() {
  return timed(2, "Lyapunov decrease U_{k+1} <= U_k + 1e-10 (20 Lasso x q in {1,1.5,2})", [](CriterionResult& r) {
    CheckResult all;
    for (const auto& run : lasso_runs()) all.merge(check_lyapunov_descent(run.series, 1e-10));
    r.pass = all.ok && all.checked > 0;
    r.detail = describe(all);
  });
}

CriterionResult check_descent_inequality() {
  return timed(3, "descent inequality slack >= -1e-10 (same runs)", [](CriterionResult& r) {
    CheckResult all;
    for (const auto& run : lasso_runs()) all.merge(check_descent_slack(run.series, 1e-10));
    r.pass = all.ok && all.checked > 0;
    r.detail = describe(all);
  });
}

CriterionResult check_min_gap_bound() {
  return timed(4, "min-gap bound min P_i <= U_0 / sum gamma_k at every K (same runs)", [](CriterionResult& r) {
    CheckResult all;
    for (const auto& run : lasso_runs()) all.merge(check_min_gap(run.path, run.series));
    r.pass = all.ok && all.checked > 0;
    r.detail = describe(all);
  });
}

CriterionResult check_rate_envelope_1d() {
  return timed(5, "sublinear rate envelope on |x|^p/p, p in {1.3,1.5,1.9}, K <= 1e5", [](CriterionResult& r) {
    CheckResult all;
    std::size_t longest = 0;
    for (const auto& run : power_runs()) {
      const RateEnvelope env = rate_envelope(run.path, run.series, run.nu, run.lip_holder);
      all.merge(check_rate_envelope(env));
      longest = std::max(longest, run.trace.iterations());
    }
    r.pass = all.ok && all.checked > 0;
    r.detail = describe(all) + ", longest run " + std::to_string(longest) + " iterations";
  });
}

CriterionResult check_stepsize_ratio_and_k2() {
  return timed(6, "stepsize ratio cap on all runs; K2 lower bound on 1-D power runs", [](CriterionResult& r) {
    CheckResult cap;
    for (const auto& run : lasso_runs()) cap.merge(check_ratio_cap(run.path));
    for (const auto& run : power_runs()) cap.merge(check_ratio_cap(run.path));
    CheckResult k2;
    for (const auto& run : power_runs()) k2.merge(check_k2_bound(run.path, run.nu));
    r.pass = cap.ok && k2.ok && cap.checked > 0 && k2.checked > 0;
    r.detail = "ratio cap: " + describe(cap) + "; K2 bound: " + describe(k2);
  });
}

CriterionResult check_operator_accounting() {
  return timed(7, "operator calls per iteration: adaPG 2, AC-FGM 2, NUPG 1+#LS, F-NUPG 3+#LS", [](CriterionResult& r) {
    struct Tally {
      std::size_t rows = 0, bad = 0;
      std::map<long, std::size_t> mismatch;  // observed - expected -> count
    };
    std::map<std::string, Tally> tally;
    auto audit = [&](const std::string& solver, const SolverTrace& t, auto expected) {
      Tally& ta = tally[solver];
      for (std::size_t k = 1; k < t.records.size(); ++k) {
        const auto delta = static_cast<long>(t.records[k].a_calls - t.records[k - 1].a_calls);
        const long want = expected(t.records[k]);
        ++ta.rows;
        if (delta != want) {
          ++ta.bad;
          ++ta.mismatch[delta - want];
        }
      }
    };
    auto two = [](const TraceRecord&) { return 2L; };
    auto nupg_cost = [](const TraceRecord& rec) { return 1L + rec.ls_trials; };
    auto fnupg_cost = [](const TraceRecord& rec) { return 3L + rec.ls_trials; };

    std::vector<CompositeProblem> problems;
    const auto inst = suite_instances();
    for (std::size_t i = 0; i < inst.size(); i += 4) problems.push_back(inst[i].to_problem());
    problems.push_back(generate_mixture(MixtureSpec{60, {{40, 1.8}, {30, 1.5}}, 0.1, 3}));
    std::mt19937_64 rng(11);
    for (auto& [name, prob] : family_problems(rng)) problems.push_back(std::move(prob));

    for (const auto& run : lasso_runs()) audit("adapg", run.trace, two);
    for (const auto& prob : problems) {
      ExperimentConfig cfg;
      cfg.solvers = default_lineup();
      cfg.budget = 1500;
      const ExperimentResult res = run_experiment(cfg, prob);
      for (std::size_t i = 0; i < res.traces.size(); ++i) {
        switch (cfg.solvers[i].kind) {
          case SolverSpec::Kind::adapg: audit("adapg", res.traces[i], two); break;
          case SolverSpec::Kind::acfgm: audit("acfgm", res.traces[i], two); break;
          case SolverSpec::Kind::nupg: audit("nupg", res.traces[i], nupg_cost); break;
          case SolverSpec::Kind::fnupg: audit("fnupg", res.traces[i], fnupg_cost); break;
        }
      }
    }
    std::ostringstream os;
    bool ok = true;
    for (const auto& [name, ta] : tally) {
      os << name << " " << ta.rows - ta.bad << "/" << ta.rows;
      if (ta.bad) {
        ok = false;
        os << " (observed-expected:";
        for (const auto& [d, c] : ta.mismatch) os << " " << (d > 0 ? "+" : "") << d << "x" << c;
        os << ")";
      }
      os << "; ";
      if (ta.rows == 0) ok = false;
    }
    r.pass = ok;
    r.detail = os.str();
  });
}

CriterionResult check_generator_certificates() {
  return timed(8, "generator certificates: 100 random Lasso configs pass KKT at 1e-10", [](CriterionResult& r) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> mdist(20, 120);
    std::uniform_real_distribution<double> pdist(1.1, 2.0);
    std::uniform_real_distribution<double> ldist(0.1, 2.0);
    std::size_t passed = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t m = mdist(rng);
      const std::size_t n = m + mdist(rng);
      const std::size_t k = 1 + rng() % std::min(m, n / 5);
      const double p = pdist(rng);
      const double lambda = ldist(rng);
      const GeneratedInstance g = generate_pnorm_lasso(m, n, k, p, lambda, rng());

      // Subgradient inclusion computed from raw arrays.
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += g.A(i, j) * g.x_star[j];
        const double res = ax - g.b[i];
        w[i] = (res < 0 ? -1.0 : 1.0) * std::pow(std::abs(res), p - 1.0);
      }
      double err = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double gj = 0.0;
        for (std::size_t i = 0; i < m; ++i) gj += g.A(i, j) * w[i];
        const double xj = g.x_star[j];
        if (xj != 0.0)
          err = std::max(err, std::abs(gj + lambda * (xj > 0 ? 1.0 : -1.0)));
        else
          err = std::max(err, std::abs(gj) - lambda);
      }
      const CompositeProblem prob = g.to_problem();
      err = std::max(err, kkt_residual(prob, g.x_star));
      worst = std::max(worst, err);
      if (err <= 1e-10 && certificate_holds(prob)) ++passed;
    }
    r.pass = passed == 100;
    r.detail = std::to_string(passed) + "/100 certified, worst violation " + sci(worst);
  });
}

CriterionResult check_lasso_ordering() {
  return timed(9, "lasso 100x300x30 p=1.5: adaPG(q=1.5) reaches gap 1e-6 with fewer calls than NUPG",
               [](CriterionResult& r) {
                 ExperimentConfig cfg = preset("lasso-small");
                 cfg.solvers = parse_solver_list("adapg:q=1.5,nupg:eps=1e-12:eta=0.5");
                 cfg.budget = 20000;
                 const ExperimentResult res = run_experiment(cfg);
                 const auto& a = res.summary[0].calls_to_gap[1];
                 const auto& b = res.summary[1].calls_to_gap[1];
                 auto show = [](const std::optional<std::uint64_t>& v) {
                   return v ? std::to_string(*v) : std::string("not reached");
                 };
                 r.pass = a.has_value() && (!b.has_value() || *a < *b);
                 r.detail = "calls to gap 1e-6: adaPG " + show(a) + ", NUPG " + show(b);
               });
}

CriterionResult check_gradients() {
  return timed(10, "finite-difference gradients, 4 loss families x 100 points, rel err <= 1e-5",
               [](CriterionResult& r) {
                 std::mt19937_64 rng(99);
                 std::normal_distribution<double> nd(0.0, 1.0);
                 std::ostringstream os;
                 bool ok = true;
                 for (auto& [name, prob] : family_problems(rng)) {
                   const Eigen::Index n = static_cast<Eigen::Index>(prob.dim());
                   int done = 0;
                   double worst = 0.0;
                   while (done < 100) {
                     Vector x(n);
                     for (Eigen::Index i = 0; i < n; ++i) x[i] = nd(rng);
                     if (!smooth_enough(prob, x)) continue;
                     const Vector g = prob.f.value_grad(x).grad;
                     Vector fd(n);
                     const double h = 1e-6;
                     for (Eigen::Index i = 0; i < n; ++i) {
                       Vector xp = x, xm = x;
                       xp[i] += h;
                       xm[i] -= h;
                       fd[i] = (prob.f.value_grad(xp).value - prob.f.value_grad(xm).value) / (2.0 * h);
                     }
                     const double err = (fd - g).norm() / std::max(g.norm(), 1e-12);
                     worst = std::max(worst, err);
                     ++done;
                   }
                   if (worst > 1e-5) ok = false;
                   os << name << " " << sci(worst) << "; ";
                 }
                 r.pass = ok;
                 r.detail = "worst relative error: " + os.str();
               });
}

CriterionResult check_acfgm_recursion() {
  return timed(11, "AC-FGM recursion: tau_3 = 2.5 when alpha = 0, c_2 = c_1; 3 steps on a 1-D quadratic",
               [](CriterionResult& r) {
                 bool ok = true;
                 std::ostringstream os;
                 for (double c1 : {1.0, 0.5, 4.0, 0.3, 7.0}) {
                   const double beta = kDefaultAcfgmBeta;
                   const double gamma2 = beta / (2.0 * c1);
                   const double tau3 = acfgm::next_tau(2.0, gamma2, c1, 0.0, beta);
                   if (std::abs(tau3 - 2.5) > 4e-16) ok = false;
                   if (c1 == 1.0 && tau3 != 2.5) ok = false;
                 }
                 os << "tau_3 ok=" << ok;

                 // f = x^2/2, g = 0, x0 = 1
                 DenseMatrix a(1, 1);
                 a(0, 0) = 1.0;
                 auto op = std::make_shared<CountedOperator>(std::move(a));
                 const CompositeProblem prob{SmoothLoss(op, PNormResidual{2.0, Vector::Zero(1)}), Regularizer::zero(),
                                             Certificate{Vector::Zero(1), 0.0}};
                 ACFGMConfig cfg;
                 cfg.x0 = Vector::Constant(1, 1.0);
                 cfg.gamma1 = 0.5;
                 StoppingRule stop;
                 stop.max_iterations = 3;
                 RunOptions opts;
                 opts.keep_iterates = true;
                 const SolverTrace t = acfgm_run(prob, cfg, stop, opts);
                 if (t.records.size() != 4) {
                   r.pass = false;
                   r.detail = "expected 3 iterations, got " + std::to_string(t.iterations());
                   return;
                 }
                 const double beta = cfg.beta, eps = cfg.epsilon;
                 // c_1 from the offline step x0 -> x0 - gamma1 x0
                 const double dx = cfg.gamma1;
                 const double c1 = (std::sqrt(dx * dx * dx * dx + eps * eps / 16.0) - eps / 4.0) / (dx * dx);
                 const double g1 = 0.5 * (beta / (4.0 * (1.0 - beta) * c1) + 1.0 / (3.0 * c1));
                 const double g2 = beta / (2.0 * c1);
                 const double tau1 = 0.0, tau2 = 2.0;
                 const double x1 = t.iterates[1][0], x2 = t.iterates[2][0];
                 const double c2 = (x2 - x1) * (x2 - x1) /
                                   (2.0 * (0.5 * x1 * x1 - 0.5 * x2 * x2 - x2 * (x1 - x2)) + eps / tau2);
                 const double tau3 = tau2 + 2.0 * g2 * c2 / (beta * tau2);
                 const double g3 = std::min((tau1 + 1.0) / tau2 * g2, beta * tau2 / (4.0 * c2));
                 // iterates by hand
                 const double y0 = 1.0, x0 = 1.0;
                 const double z1 = y0 - g1 * x0;
                 const double y1 = y0;  // beta_1 = 0
                 const double hx1 = z1;  // tau_1 = 0
                 const double z2 = y1 - g2 * hx1;
                 const double y2 = (1.0 - beta) * y1 + beta * z2;
                 const double hx2 = (z2 + tau2 * hx1) / (1.0 + tau2);
                 const double z3 = y2 - g3 * hx2;
                 const double hx3 = (z3 + tau3 * hx2) / (1.0 + tau3);

                 double worst = 0.0;
                 auto cmp = [&](double got, double want) {
                   worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
                 };
                 cmp(t.records[1].gamma, g1);
                 cmp(t.records[2].gamma, g2);
                 cmp(t.records[3].gamma, g3);
                 cmp(t.records[1].tau, tau1);
                 cmp(t.records[2].tau, tau2);
                 cmp(t.records[3].tau, tau3);
                 cmp(t.records[1].beta, 0.0);
                 cmp(t.records[2].beta, beta);
                 cmp(t.records[3].beta, beta);
                 cmp(t.records[2].lip, c2);
                 cmp(t.iterates[1][0], hx1);
                 cmp(t.iterates[2][0], hx2);
                 cmp(t.iterates[3][0], hx3);
                 if (worst > 1e-13) ok = false;
                 os << ", tau_3 on quadratic " << tau3 << ", 3-step fields worst deviation " << sci(worst);
                 r.pass = ok;
                 r.detail = os.str();
               });
}

std::vector<CriterionResult> run_suite(const std::string& name,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = CriterionResult (*)();
  std::vector<Fn> fns;
  if (name == "invariants")
    fns = {check_forward_operator_identity, check_lyapunov_decrease, check_descent_inequality, check_min_gap_bound,
           check_stepsize_ratio_and_k2, check_operator_accounting, check_generator_certificates, check_gradients,
           check_acfgm_recursion};
  else if (name == "rates")
    fns = {check_rate_envelope_1d, check_lasso_ordering};
  else if (name == "all")
    fns = {check_forward_operator_identity, check_lyapunov_decrease, check_descent_inequality,
           check_min_gap_bound, check_rate_envelope_1d, check_stepsize_ratio_and_k2,
           check_operator_accounting, check_generator_certificates, check_lasso_ordering,
           check_gradients, check_acfgm_recursion};
  else
    throw std::invalid_argument("unknown suite '" + name + "' (expected invariants, rates or all)");
  std::vector<CriterionResult> out;
  for (Fn f : fns) {
    out.push_back(f());
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%2d] %s (%.2fs) ", r.id, r.pass ? "PASS" : "FAIL", r.seconds);
  return head + r.title + " :: " + r.detail;
}

}  // namespace adaprox
