#include "spbfgs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <thread>

#include "spbfgs/error.hpp"

namespace spbfgs {

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ConfigError, what); };
  if (problems.empty()) fail("no problems listed");
  if (methods.empty()) fail("no methods listed");
  if (cells.empty()) fail("no noise cells listed");
  if (replicates < 1) fail("replicates must be >= 1");
  if (budget.limit <= 0) fail("budget must be > 0");
  if (workers < 1) fail("workers must be >= 1");
  for (const auto& c : cells) {
    if (!(c.eps_f >= 0.0) || !(c.eps_g >= 0.0)) fail("noise levels must be >= 0");
  }
  for (const auto& m : methods) {
    if (m.name.empty()) fail("method without a name");
    m.policy.validate();
  }
  ls.validate();
}

double delta_opt(double phi_best, double phi_star, bool* floored) {
  const double gap = phi_best - phi_star;
  const bool low = !(gap > kGapFloor);
  if (floored) *floored = low;
  return low ? kDeltaOptFloor : std::log10(gap);
}

SampleStats sample_stats(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyCell, "no samples");
  SampleStats st;
  const std::size_t n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(n);
  std::sort(values.begin(), values.end());
  st.min = values.front();
  st.max = values.back();
  st.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.variance = ss / static_cast<double>(n - 1);
  }
  return st;
}

namespace {

PenaltyPolicy policy_for_cell(const MethodSpec& method, double eps_g) {
  PenaltyPolicy policy = method.policy;
  if (method.kind == MethodKind::Bfgs) {
    policy.rule = ConstantInfinity{};
    policy.recovery = SkipRecovery{};
    return policy;
  }
  if (method.slope_per_noise) {
    const double slope = eps_g > 0.0 ? *method.slope_per_noise / eps_g
                                     : std::numeric_limits<double>::infinity();
    if (auto* lin = std::get_if<LinearInStep>(&policy.rule)) lin->slope = slope;
    if (auto* thr = std::get_if<Thresholded>(&policy.rule)) thr->slope = slope;
  }
  return policy;
}

}  // namespace

RunResult execute_run(const ExperimentSpec& spec, const RunPlan& plan) {
  RunResult out;
  out.problem = plan.problem;
  out.method = plan.method->name;
  out.cell = plan.cell;
  out.replicate = plan.replicate;
  try {
    std::optional<Eigen::Index> dim;
    if (auto it = spec.dimensions.find(plan.problem); it != spec.dimensions.end()) {
      dim = it->second;
    }
    auto problem = std::make_shared<const Problem>(make_problem(plan.problem, dim));

    const NoiseCell& cell = spec.cells[plan.cell];
    double eps_f = cell.eps_f;
    double eps_g = cell.eps_g;
    if (spec.noise_mode == NoiseMode::Relative) {
      eps_f *= std::abs(problem->eval_f(problem->x0));
      eps_g *= problem->eval_grad(problem->x0).norm();
    }
    out.eps_f = eps_f;
    out.eps_g = eps_g;

    RunConfig cfg;
    cfg.policy = policy_for_cell(*plan.method, eps_g);
    cfg.ls = spec.ls;
    if (spec.eps_a_from_noise) cfg.ls.eps_a = eps_f;
    cfg.budget = spec.budget;
    cfg.noise = NoiseSpec{eps_f, eps_g, spec.master_seed};
    cfg.record_hessian_diagnostics = spec.record_hessian_diagnostics;

    Rng stream = derive_stream(spec.master_seed,
                               {stable_hash(plan.problem), stable_hash(plan.method->name),
                                static_cast<std::uint64_t>(plan.cell),
                                static_cast<std::uint64_t>(plan.replicate)});
    RunTrace trace = plan.method->kind == MethodKind::Bfgs
                         ? minimize_baseline_bfgs(problem, cfg, std::move(stream))
                         : minimize(problem, cfg, std::move(stream));

    out.failed = trace.failed;
    out.failure = trace.failure;
    out.phi_best = trace.phi_best;
    out.final_phi = trace.final_phi;
    out.dopt = delta_opt(trace.phi_best, problem->phi_star, &out.floored);
    out.iterations = trace.iterations;
    out.curvature_failures = trace.curvature_failures;
    out.f_evals = trace.f_evals;
    if (spec.write_traces) out.trace = std::move(trace);
  } catch (const Error& e) {
    out.failed = true;
    out.failure = e.what();
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<RunPlan> plans;
  for (const auto& problem : spec.problems)
    for (const auto& method : spec.methods)
      for (std::size_t c = 0; c < spec.cells.size(); ++c)
        for (int r = 0; r < spec.replicates; ++r) plans.push_back({problem, &method, c, r});

  ExperimentResult result;
  result.runs.resize(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      result.runs[i] = execute_run(spec, plans[i]);
    }
  };
  const int threads = std::min<int>(spec.workers, static_cast<int>(plans.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  result.summary = summarize(result.runs);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs) {
  struct Cell {
    SummaryRow row;
    std::size_t cell = 0;
    std::vector<double> dopt;
    double iters = 0.0;
  };
  std::vector<Cell> cells;
  auto find = [&cells](const RunResult& r) -> Cell* {
    for (auto& c : cells) {
      if (c.row.problem == r.problem && c.row.method == r.method && c.cell == r.cell) return &c;
    }
    return nullptr;
  };
  for (const auto& r : runs) {
    if (r.failed) continue;
    Cell* c = find(r);
    if (!c) {
      cells.push_back({});
      c = &cells.back();
      c->cell = r.cell;
      c->row.problem = r.problem;
      c->row.method = r.method;
      c->row.eps_f = r.eps_f;
      c->row.eps_g = r.eps_g;
    }
    c->dopt.push_back(r.dopt);
    c->iters += static_cast<double>(r.iterations);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(cells.size());
  for (auto& c : cells) {
    const SampleStats st = sample_stats(c.dopt);
    SummaryRow row = c.row;
    row.n_runs = c.dopt.size();
    row.mean_dopt = st.mean;
    row.median_dopt = st.median;
    row.min_dopt = st.min;
    row.max_dopt = st.max;
    row.var_dopt = st.variance;
    row.mean_iters = c.iters / static_cast<double>(row.n_runs);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem << ',' << r.method << ',' << num(r.eps_f) << ',' << num(r.eps_g) << ','
        << r.n_runs << ',' << num(r.mean_dopt) << ',' << num(r.median_dopt) << ','
        << num(r.min_dopt) << ',' << num(r.max_dopt) << ','
        << (r.var_dopt ? num(*r.var_dopt) : std::string()) << ',' << num(r.mean_iters) << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "problem,method,cell,replicate,eps_f,eps_g,status,phi_best,final_phi,dopt,"
         "dopt_floored,iterations,curvature_failures,f_evals\n";
  for (const auto& r : runs) {
    out << r.problem << ',' << r.method << ',' << r.cell << ',' << r.replicate << ','
        << exact(r.eps_f) << ',' << exact(r.eps_g) << ',' << (r.failed ? "failed" : "ok") << ','
        << exact(r.phi_best) << ',' << exact(r.final_phi) << ',' << exact(r.dopt) << ','
        << (r.floored ? 1 : 0) << ',' << r.iterations << ',' << r.curvature_failures << ','
        << r.f_evals << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "problem,method,cell,replicate,k,f,phi,grad_norm,alpha,beta,sty,curvature_failed,"
         "recovered,ls_exhausted,evals,h_pd,scaled_cond\n";
  for (const auto& r : runs) {
    if (!r.trace) continue;
    for (const auto& rec : r.trace->records) {
      out << r.problem << ',' << r.method << ',' << r.cell << ',' << r.replicate << ','
          << rec.k << ',' << exact(rec.f) << ',' << exact(rec.phi) << ','
          << exact(rec.grad_norm) << ',' << exact(rec.alpha) << ','
          << (std::isnan(rec.beta) ? std::string() : exact(rec.beta)) << ','
          << exact(rec.sty) << ',' << rec.curvature_failed << ',' << rec.recovered << ','
          << rec.ls_exhausted << ',' << rec.evals_so_far << ','
          << (rec.h_positive_definite ? (*rec.h_positive_definite ? "1" : "0") : "") << ','
          << (rec.scaled_condition ? exact(*rec.scaled_condition) : std::string()) << '\n';
    }
  }
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "summary.csv", std::ios::binary);
    write_summary_csv(f, result.summary);
  }
  {
    std::ofstream f(dir / "runs.csv", std::ios::binary);
    write_runs_csv(f, result.runs);
  }
  if (spec.write_traces) {
    std::ofstream f(dir / "traces.csv", std::ios::binary);
    write_trace_csv(f, result.runs);
  }
}

}  // namespace spbfgs
