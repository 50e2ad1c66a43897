#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spbfgs/line_search.hpp"
#include "spbfgs/optimizer.hpp"
#include "spbfgs/penalty_policy.hpp"

namespace spbfgs {

enum class MethodKind { SpBfgs, Bfgs };

struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::SpBfgs;
  PenaltyPolicy policy;
  /// When set, a LinearInStep/Thresholded slope is replaced per noise cell
  /// by slope_per_noise / eps_g (infinite when eps_g = 0).
  std::optional<double> slope_per_noise;
};

struct NoiseCell {
  double eps_f = 0.0;
  double eps_g = 0.0;
};

/// Absolute: cells are used as given. Relative: eps_f *= |phi(x0)| and
/// eps_g *= |grad phi(x0)|, computed before any noisy evaluation.
enum class NoiseMode { Absolute, Relative };

struct ExperimentSpec {
  std::vector<std::string> problems;
  std::map<std::string, Eigen::Index> dimensions;  // per-problem overrides
  std::vector<MethodSpec> methods;
  std::vector<NoiseCell> cells;
  NoiseMode noise_mode = NoiseMode::Absolute;
  int replicates = 30;
  std::uint64_t master_seed = 1;
  Budget budget = Budget::function_evals(2000);
  LineSearchConfig ls;
  bool eps_a_from_noise = false;  // eps_a := eps_f of the cell
  bool record_hessian_diagnostics = false;
  bool write_traces = false;
  int workers = 1;
  std::string out_dir = "out";

  /// Throws ConfigError.
  void validate() const;
};

/// Values <= this gap are floored when taking log10.
inline constexpr double kGapFloor = 1e-300;
inline constexpr double kDeltaOptFloor = -300.0;

/// log10(phi_best - phi*), floored at -300.
double delta_opt(double phi_best, double phi_star, bool* floored = nullptr);

struct RunResult {
  std::string problem;
  std::string method;
  std::size_t cell = 0;
  int replicate = 0;
  double eps_f = 0.0;
  double eps_g = 0.0;
  bool failed = false;
  std::string failure;
  double phi_best = 0.0;
  double final_phi = 0.0;
  double dopt = 0.0;
  bool floored = false;
  long iterations = 0;
  long curvature_failures = 0;
  long f_evals = 0;
  std::optional<RunTrace> trace;  // kept only when traces are written
};

struct SummaryRow {
  std::string problem;
  std::string method;
  double eps_f = 0.0;
  double eps_g = 0.0;
  std::size_t n_runs = 0;
  double mean_dopt = 0.0;
  double median_dopt = 0.0;
  double min_dopt = 0.0;
  double max_dopt = 0.0;
  std::optional<double> var_dopt;  // Bessel-corrected; empty for one run
  double mean_iters = 0.0;
};

struct SampleStats {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> variance;
};

/// Throws EmptyCell for an empty sample.
SampleStats sample_stats(std::vector<double> values);

/// The exact inputs of one run; deterministic in (spec, indices).
struct RunPlan {
  std::string problem;
  const MethodSpec* method = nullptr;
  std::size_t cell = 0;
  int replicate = 0;
};

RunResult execute_run(const ExperimentSpec& spec, const RunPlan& plan);

struct ExperimentResult {
  std::vector<RunResult> runs;  // sorted by (problem, method, cell, replicate)
  std::vector<SummaryRow> summary;
};

/// Runs every (problem, method, cell, replicate) combination, on
/// spec.workers threads. Failed runs are kept and excluded from statistics.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Groups successful runs by (problem, method, cell) in run order. Cells
/// with no successful run are dropped.
std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs);

inline constexpr const char* kSummaryHeader =
    "problem,method,eps_f,eps_g,n_runs,mean_dopt,median_dopt,min_dopt,max_dopt,var_dopt,"
    "mean_iters";

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs);
/// Long format, one row per iteration per run.
void write_trace_csv(std::ostream& out, const std::vector<RunResult>& runs);

/// Writes summary.csv, runs.csv and (if enabled) traces.csv into spec.out_dir.
void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

/// Parses the line-oriented `key = value` format with `[section]` headers.
/// Errors carry the offending line number.
ExperimentSpec parse_experiment_config(const std::string& text);
ExperimentSpec load_experiment_config(const std::string& path);

}  // namespace spbfgs
