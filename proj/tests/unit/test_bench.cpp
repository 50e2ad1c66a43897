#include <sstream>

#include "doctest.h"
#include "spbfgs/bench.hpp"
#include "spbfgs/error.hpp"

using namespace spbfgs;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

const char* kSmall = R"(
[experiment]
problems = rosenbr, beale
replicates = 3
seed = 11
budget_evals = 200
workers = 2

[noise]
mode = absolute
cells = 0:1e-2, 1e-4:1e-4

[line_search]
max_backtracks = 45
eps_a = noise

[method SP-BFGS]
type = spbfgs
beta = linear
slope_per_noise = 1e8

[method BFGS]
type = bfgs
)";

std::string summary_csv(const ExperimentSpec& spec) {
  std::ostringstream out;
  write_summary_csv(out, run_experiment(spec).summary);
  return out.str();
}

}  // namespace

TEST_CASE("sample statistics") {
  const SampleStats a = sample_stats({-1.0, -3.0});
  CHECK(a.mean == -2.0);
  CHECK(a.median == -2.0);
  CHECK(a.variance.value() == 2.0);
  const SampleStats b = sample_stats({-5.0, -1.0, -3.0});
  CHECK(b.median == -3.0);
  CHECK(b.min == -5.0);
  CHECK(b.max == -1.0);
  CHECK_FALSE(sample_stats({4.0}).variance.has_value());
  CHECK_THROWS_AS(sample_stats({}), Error);
}

TEST_CASE("delta_opt floor") {
  bool floored = false;
  CHECK(delta_opt(1e-3, 0.0, &floored) == doctest::Approx(-3.0));
  CHECK_FALSE(floored);
  CHECK(delta_opt(1.0, 1.0, &floored) == kDeltaOptFloor);
  CHECK(floored);
}

TEST_CASE("summary CSV") {
  SummaryRow one{"ROSENBR", "BFGS", 0.0, 0.01, 1, -2.0, -2.0, -2.0, -2.0, std::nullopt, 10.0};
  std::ostringstream out;
  write_summary_csv(out, {one});
  const std::string csv = out.str();
  CHECK(csv.rfind(std::string(kSummaryHeader) + "\n", 0) == 0);
  // Variance is an empty field when there is a single run.
  CHECK(csv.find(",-2,,10") != std::string::npos);
}

TEST_CASE("config parsing") {
  const ExperimentSpec spec = parse_experiment_config(kSmall);
  CHECK(spec.problems == std::vector<std::string>{"ROSENBR", "BEALE"});
  CHECK(spec.replicates == 3);
  CHECK(spec.master_seed == 11);
  CHECK(spec.budget.kind == Budget::Kind::FunctionEvals);
  CHECK(spec.budget.limit == 200);
  REQUIRE(spec.cells.size() == 2);
  CHECK(spec.cells[1].eps_f == 1e-4);
  CHECK(spec.eps_a_from_noise);
  CHECK(spec.ls.max_backtracks == 45);
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0].kind == MethodKind::SpBfgs);
  CHECK(spec.methods[0].slope_per_noise.value() == 1e8);
  CHECK(spec.methods[1].kind == MethodKind::Bfgs);

  CHECK(config_error("[experiment]\nreplicates = many\n").find("line 2") != std::string::npos);
  CHECK(config_error("[bogus]\n").find("line 1") != std::string::npos);
  CHECK(config_error("[experiment]\nproblems = NOPE\n").find("NOPE") != std::string::npos);
  CHECK(config_error("[noise]\ncells = 0.1\n").find("line 2") != std::string::npos);
  CHECK(config_error("replicates = 3\n").find("line 1") != std::string::npos);
  CHECK(config_error("[experiment]\nbudget_evals = 10\nbudget_iters = 5\n").find("line 3") !=
        std::string::npos);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/run.cfg"), Error);
}

TEST_CASE("experiments are deterministic and order independent") {
  ExperimentSpec spec = parse_experiment_config(kSmall);
  const std::string a = summary_csv(spec);
  spec.workers = 1;
  const std::string b = summary_csv(spec);
  spec.workers = 4;
  const std::string c = summary_csv(spec);
  CHECK(a == b);
  CHECK(a == c);
  // 2 problems x 2 methods x 2 cells.
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 8);
}

TEST_CASE("budgets are honoured per run") {
  const ExperimentSpec spec = parse_experiment_config(kSmall);
  const ExperimentResult r = run_experiment(spec);
  CHECK(r.runs.size() == 2 * 2 * 2 * 3);
  for (const auto& run : r.runs) {
    CHECK_FALSE(run.failed);
    CHECK(run.f_evals <= 200);
  }
}

TEST_CASE("noiseless infinite-beta methods summarize identically") {
  ExperimentSpec spec;
  spec.problems = {"ROSENBR"};
  spec.cells = {{0.0, 0.0}};
  spec.replicates = 1;
  spec.budget = Budget::function_evals(300);
  MethodSpec sp{"A", MethodKind::SpBfgs, {}, std::nullopt};
  MethodSpec bf{"B", MethodKind::Bfgs, {}, std::nullopt};
  spec.methods = {sp, bf};
  const auto rows = run_experiment(spec).summary;
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].mean_dopt == rows[1].mean_dopt);
  CHECK(rows[0].mean_iters == rows[1].mean_iters);
}

TEST_CASE("relative noise uses the start point") {
  ExperimentSpec spec;
  spec.problems = {"ROSENBR"};
  spec.cells = {{1e-4, 1e-4}};
  spec.noise_mode = NoiseMode::Relative;
  spec.replicates = 1;
  spec.budget = Budget::function_evals(50);
  spec.methods = {MethodSpec{"B", MethodKind::Bfgs, {}, std::nullopt}};
  const Problem p = rosenbrock();
  const auto r = run_experiment(spec);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.runs[0].eps_f == doctest::Approx(1e-4 * std::abs(p.eval_f(p.x0))));
  CHECK(r.runs[0].eps_g == doctest::Approx(1e-4 * p.eval_grad(p.x0).norm()));
}
