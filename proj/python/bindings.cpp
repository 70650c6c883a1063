#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adaprox/data.hpp"
#include "adaprox/harness.hpp"
#include "adaprox/suites.hpp"

namespace py = pybind11;
using namespace adaprox;

namespace {

py::dict trace_columns(const SolverTrace& t) {
  const auto n = static_cast<Eigen::Index>(t.records.size());
  Vector iter(n), a(n), fc(n), gc(n), cost(n), gap(n), gamma(n), res(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = t.records[static_cast<std::size_t>(i)];
    iter[i] = static_cast<double>(r.iter);
    a[i] = static_cast<double>(r.a_calls);
    fc[i] = static_cast<double>(r.f_calls);
    gc[i] = static_cast<double>(r.grad_calls);
    cost[i] = r.cost;
    gap[i] = r.gap;
    gamma[i] = r.gamma;
    res[i] = r.residual;
  }
  py::dict d;
  d["iter"] = iter;
  d["a_calls"] = a;
  d["f_calls"] = fc;
  d["grad_calls"] = gc;
  d["cost"] = cost;
  d["gap"] = gap;
  d["gamma"] = gamma;
  d["residual"] = res;
  d["stop"] = std::string(to_string(t.stop_reason));
  d["x"] = t.final_iterate;
  return d;
}

py::dict to_python(const ExperimentResult& res) {
  py::dict out;
  std::ostringstream csv;
  write_csv(res, csv);
  out["csv"] = csv.str();
  out["certified"] = res.certified;
  out["reference"] = res.reference;
  py::dict traces;
  for (const auto& t : res.traces) traces[py::str(t.solver)] = trace_columns(t);
  out["traces"] = traces;
  py::list summary;
  for (const auto& s : res.summary) {
    py::dict d;
    d["solver"] = s.solver;
    py::list calls;
    for (const auto& c : s.calls_to_gap) calls.append(c ? py::cast(*c) : py::none());
    d["calls_to_gap"] = calls;
    d["final_gap"] = s.final_gap;
    d["best_gap"] = s.best_gap;
    d["iterations"] = s.iterations;
    d["a_calls"] = s.a_calls;
    d["stop"] = std::string(to_string(s.stop));
    summary.append(d);
  }
  out["summary"] = summary;
  return out;
}

ExperimentConfig configure(ExperimentConfig cfg, const std::optional<std::string>& solvers,
                           std::optional<std::uint64_t> budget) {
  if (solvers) cfg.solvers = parse_solver_list(*solvers);
  if (budget) cfg.budget = *budget;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("adapg_stepsize", &adapg_stepsize, py::arg("gamma_k"), py::arg("gamma_prev"), py::arg("ell"),
        py::arg("lip"), py::arg("q") = 1.5);

  m.def(
      "generate_lasso",
      [](std::size_t mm, std::size_t n, std::size_t k, double p, double lambda, std::uint64_t seed) {
        const GeneratedInstance g = generate_pnorm_lasso(mm, n, k, p, lambda, seed);
        py::dict d;
        d["A"] = g.A;
        d["b"] = g.b;
        d["x_star"] = g.x_star;
        d["phi_star"] = g.phi_star;
        d["support"] = g.support;
        d["p"] = g.p;
        d["lambda"] = g.lambda;
        return d;
      },
      py::arg("m"), py::arg("n"), py::arg("k"), py::arg("p") = 1.5, py::arg("lam") = 1.0, py::arg("seed") = 50);

  m.def(
      "solve_lasso",
      [](const DenseMatrix& A, const Vector& b, double p, double lambda, const std::string& solvers,
         std::uint64_t budget, std::optional<Vector> x_star, std::optional<double> phi_star) {
        if (A.rows() != b.size()) throw ConfigError("A and b have mismatched sizes");
        if (x_star.has_value() != phi_star.has_value()) throw ConfigError("x_star and phi_star go together");
        auto op = std::make_shared<CountedOperator>(A);
        SmoothLoss f(op, PNormResidual{p, b});
        std::optional<Certificate> cert;
        if (x_star) cert = Certificate{*x_star, *phi_star};
        const CompositeProblem prob{std::move(f), Regularizer::l1(lambda), cert};
        ExperimentConfig cfg;
        cfg.name = "lasso";
        cfg.solvers = parse_solver_list(solvers);
        cfg.budget = budget;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg, prob);
        }
        return to_python(res);
      },
      py::arg("A"), py::arg("b"), py::arg("p") = 1.5, py::arg("lam") = 1.0,
      py::arg("solvers") = "adapg:q=1.5", py::arg("budget") = 20000, py::arg("x_star") = py::none(),
      py::arg("phi_star") = py::none());

  m.def(
      "run_preset",
      [](const std::string& name, std::optional<std::string> solvers, std::optional<std::uint64_t> budget) {
        const auto cfg = configure(preset(name), solvers, budget);
        return to_python(run_experiment(cfg));
      },
      py::arg("name"), py::arg("solvers") = py::none(), py::arg("budget") = py::none());

  m.def(
      "run_config",
      [](const std::string& json_text, std::optional<std::string> solvers, std::optional<std::uint64_t> budget) {
        const auto cfg = configure(parse_config(json_text), solvers, budget);
        return to_python(run_experiment(cfg));
      },
      py::arg("json_text"), py::arg("solvers") = py::none(), py::arg("budget") = py::none());

  m.def("preset_names", &preset_names);

  m.def(
      "parse_libsvm",
      [](const std::string& text) {
        std::istringstream in(text);
        const LabeledDataset d = parse_libsvm(in);
        py::dict out;
        out["indptr"] = d.features.row_offsets();
        out["indices"] = d.features.col_indices();
        out["data"] = d.features.values();
        out["shape"] = py::make_tuple(d.features.rows(), d.features.cols());
        out["labels"] = d.labels;
        return out;
      },
      py::arg("text"));

  m.def(
      "check",
      [](const std::string& suite) {
        py::list out;
        for (const auto& r : run_suite(suite, {})) {
          py::dict d;
          d["id"] = r.id;
          d["title"] = r.title;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "invariants");
}
