#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chronosat/pipeline/pipeline.hpp"
#include "chronosat/rcll/instance.hpp"

namespace chronosat::bench {

/// A planner under test: either an in-process configuration or an external
/// shell command template. Placeholders: {domain} {problem} {instance}
/// {plan} {timeout}. The command must write the plan file and exit 0.
struct PlannerSpec {
  std::string label;
  std::optional<pipeline::PlannerConfig> config;
  std::string command;
  /// In-process lifted runs take their occurrence map from the instance.
  bool occurrences_from_instance = false;
};

/// The six built-in configurations: rcll-macro and rcll-fine in feasible
/// and optimal mode, lifted with deepening and with configured occurrences.
std::vector<PlannerSpec> standard_planners(const smt::SolverConfig& solver, const Rational& epsilon);

using Cell = std::pair<rcll::Complexity, int>;

struct BenchConfig {
  std::string root = "bench";
  std::string suite = "default";
  std::uint64_t seed = 1;
  std::vector<Cell> grid;  // empty means C0/C1 x 1..3 robots
  int instances_per_cell = 20;
  double timeout_s = 60;
  double grace_s = 1;
  int workers = 1;
  std::vector<PlannerSpec> planners;

  /// Throws pipeline::ConfigError on invalid settings.
  void check() const;
  std::vector<Cell> cells() const;
  std::string suite_dir() const;
};

enum class RunOutcome { Solved, NoPlan, Timeout, Unknown, Error };
std::string_view to_string(RunOutcome o);
RunOutcome parse_outcome(const std::string& text);

struct BenchRow {
  std::string planner;
  rcll::Complexity complexity = rcll::Complexity::C0;
  int robots = 1;
  std::string instance;
  RunOutcome outcome = RunOutcome::Error;
  double runtime_s = 0;
  std::optional<Rational> cost;
  std::string plan_path;
  std::string diagnostics;
};

/// `c0-r2`
std::string cell_name(const Cell& c);

/// Writes bench/<suite>/<cell>/<instance-id>/{instance.rcll,problem.pddl}
/// for the whole grid and returns the instance directories in run order.
std::vector<std::string> materialize(const BenchConfig& config);

/// Runs every (planner, instance) pair not yet recorded in runs.csv,
/// appending one row per finished run. Returns all rows of the suite.
std::vector<BenchRow> run_suite(const BenchConfig& config);

std::string csv_header();
std::string csv_row(const BenchRow& row);
std::vector<BenchRow> read_runs(const std::string& path);

struct CellSummary {
  std::string planner;
  rcll::Complexity complexity = rcll::Complexity::C0;
  int robots = 1;
  int solved = 0;
  int attempted = 0;
  std::optional<double> mean_runtime_s;  // over solved runs
  std::optional<Rational> mean_cost;
};

std::vector<CellSummary> summarize(const std::vector<BenchRow>& rows);

/// `planner,complexity,robots,solved,attempted,mean_runtime_s,mean_cost`;
/// means are `--` when nothing was solved.
std::string summary_csv(const std::vector<CellSummary>& cells);

/// One block per complexity, planners as rows, robot counts as columns.
std::string summary_table(const std::vector<CellSummary>& cells);

/// Writes summary.csv and tables.txt into `dir`.
void emit_tables(const std::vector<BenchRow>& rows, const std::string& dir);

}  // namespace chronosat::bench
