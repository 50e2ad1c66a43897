#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>

#include "spbfgs/bench.hpp"
#include "spbfgs/error.hpp"
#include "spbfgs/optimizer.hpp"
#include "spbfgs/problems.hpp"
#include "spbfgs/qn_core.hpp"
#include "spbfgs/verify.hpp"

namespace py = pybind11;
using namespace spbfgs;

namespace {

// beta comes in as a float; math.inf selects the infinite state.
PenaltyParameter to_beta(double beta) {
  return std::isinf(beta) && beta > 0 ? PenaltyParameter::infinite() : PenaltyParameter::finite(beta);
}

Matrix update(const Matrix& h, const Vector& s, const Vector& y, double beta) {
  const CurvaturePair pair(s, y);
  return spbfgs_update(SymMatrix(h), pair, compute_penalty_scalars(pair, to_beta(beta))).dense();
}

Matrix inverse_update(const Matrix& b, const Matrix& h, const Vector& s, const Vector& y, double beta) {
  const CurvaturePair pair(s, y);
  return spbfgs_inverse_update(SymMatrix(b), SymMatrix(h), pair,
                               compute_penalty_scalars(pair, to_beta(beta)))
      .dense();
}

py::dict trace_to_dict(const RunTrace& t) {
  std::vector<double> phi;
  std::vector<double> alpha;
  std::vector<double> beta;
  for (const auto& r : t.records) {
    phi.push_back(r.phi);
    alpha.push_back(r.alpha);
    beta.push_back(r.beta);
  }
  py::dict d;
  d["x"] = t.final_x;
  d["phi"] = t.final_phi;
  d["phi_best"] = t.phi_best;
  d["iterations"] = t.iterations;
  d["curvature_failures"] = t.curvature_failures;
  d["f_evals"] = t.f_evals;
  d["g_evals"] = t.g_evals;
  d["failed"] = t.failed;
  d["failure"] = t.failure;
  d["phi_trace"] = phi;
  d["alpha_trace"] = alpha;
  d["beta_trace"] = beta;
  return d;
}

py::dict run_minimize(const std::string& name, const std::string& method, double eps_f, double eps_g,
                      std::uint64_t seed, long budget_evals, long budget_iters, double slope) {
  RunConfig cfg;
  cfg.noise = NoiseSpec{eps_f, eps_g, seed};
  cfg.ls.eps_a = eps_f;
  cfg.budget = budget_iters > 0 ? Budget::iterations(budget_iters) : Budget::function_evals(budget_evals);
  const Problem p = make_problem(name);
  if (method != "spbfgs" && method != "bfgs")
    throw Error(ErrorKind::ConfigError, "method must be 'spbfgs' or 'bfgs'");
  RunTrace t;
  {
    py::gil_scoped_release release;
    if (method == "bfgs") {
      t = minimize_baseline_bfgs(p, cfg);
    } else {
      cfg.policy.rule = LinearInStep{slope, 1e-10};
      t = minimize(p, cfg);
    }
  }
  return trace_to_dict(t);
}

py::list summary_rows(const std::vector<SummaryRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["problem"] = r.problem;
    d["method"] = r.method;
    d["eps_f"] = r.eps_f;
    d["eps_g"] = r.eps_g;
    d["n_runs"] = r.n_runs;
    d["mean_dopt"] = r.mean_dopt;
    d["median_dopt"] = r.median_dopt;
    d["min_dopt"] = r.min_dopt;
    d["max_dopt"] = r.max_dopt;
    d["var_dopt"] = r.var_dopt ? py::cast(*r.var_dopt) : py::none();
    d["mean_iters"] = r.mean_iters;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_spbfgs, m) {
  m.doc() = "SP-BFGS updates, noisy test problems and the benchmark driver";

  static py::exception<Error> error(m, "SpbfgsError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("penalty_scalars", [](const Vector& s, const Vector& y, double beta) {
    const auto sc = compute_penalty_scalars(CurvaturePair(s, y), to_beta(beta));
    return py::make_tuple(sc.gamma, sc.omega);
  }, py::arg("s"), py::arg("y"), py::arg("beta"), "Returns (gamma, omega).");
  m.def("curvature_ok", [](const Vector& s, const Vector& y, double beta) {
    return spbfgs_curvature_ok(CurvaturePair(s, y), to_beta(beta));
  }, py::arg("s"), py::arg("y"), py::arg("beta"));
  m.def("bfgs_update", [](const Matrix& h, const Vector& s, const Vector& y) {
    return bfgs_update(SymMatrix(h), CurvaturePair(s, y)).dense();
  }, py::arg("H"), py::arg("s"), py::arg("y"));
  m.def("spbfgs_update", &update, py::arg("H"), py::arg("s"), py::arg("y"), py::arg("beta"));
  m.def("spbfgs_inverse_update", &inverse_update, py::arg("B"), py::arg("H"), py::arg("s"), py::arg("y"),
        py::arg("beta"));
  m.def("oracle_penalized_qp", [](const Matrix& h, const Vector& s, const Vector& y, double beta, double c) {
    const CurvaturePair pair(s, y);
    return oracle_penalized_qp(SymMatrix(h), pair, beta, make_weight_matrix(pair, c)).dense();
  }, py::arg("H"), py::arg("s"), py::arg("y"), py::arg("beta"), py::arg("c") = 1.0);

  m.def("problem_names", &problem_names);
  m.def("problem_info", [](const std::string& name) {
    const Problem p = make_problem(name);
    py::dict d;
    d["name"] = p.name;
    d["n"] = p.n;
    d["x0"] = p.x0;
    d["phi_star"] = p.phi_star;
    return d;
  }, py::arg("name"));
  m.def("evaluate", [](const std::string& name, const Vector& x) {
    const Problem p = make_problem(name, x.size());
    if (x.size() != p.n) throw Error(ErrorKind::BadDimension, "x has the wrong dimension");
    return py::make_tuple(p.eval_f(x), p.eval_grad(x));
  }, py::arg("name"), py::arg("x"), "Returns (phi(x), grad phi(x)).");

  m.def("minimize", &run_minimize, py::arg("problem"), py::arg("method") = "spbfgs",
        py::arg("eps_f") = 0.0, py::arg("eps_g") = 0.0, py::arg("seed") = 0,
        py::arg("budget_evals") = 2000, py::arg("budget_iters") = 0, py::arg("slope") = 1.0,
        "Runs one minimization. SP-BFGS uses beta = slope * |s| + 1e-10.");

  m.def("run_config", [](const std::string& text, bool write_outputs) {
    const ExperimentSpec spec = parse_experiment_config(text);
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(spec);
    }
    if (write_outputs) write_experiment_outputs(spec, r);
    return summary_rows(r.summary);
  }, py::arg("text"), py::arg("write_outputs") = false,
     "Parses a run configuration and returns its summary rows.");

  m.def("verify", []() {
    py::list out;
    for (const auto& c : run_verification()) out.append(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });
}
