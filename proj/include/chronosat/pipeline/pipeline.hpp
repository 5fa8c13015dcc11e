#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "chronosat/lifted/encoder.hpp"
#include "chronosat/pddl/model.hpp"
#include "chronosat/plan/plan.hpp"
#include "chronosat/plan/validate.hpp"
#include "chronosat/rcll/instance.hpp"
#include "chronosat/smt/solver.hpp"

namespace chronosat::pipeline {

enum class Engine { Lifted, RcllFine, RcllMacro };
enum class Objective { Feasible, Optimal };

std::string_view to_string(Engine e);
std::string_view to_string(Objective o);
Engine parse_engine(const std::string& text);
Objective parse_objective(const std::string& text);

struct PlannerConfig {
  Engine engine = Engine::RcllMacro;
  Objective objective = Objective::Feasible;
  /// Configured mode when set (lifted occurrences or RCLL step bound);
  /// iterative deepening otherwise.
  std::optional<lifted::OccurrenceMap> occurrences;
  std::optional<int> steps;
  /// Lifted deepening cap per action, multiplied by the number of goal literals.
  int max_per_action = 2;
  int initial_steps = 1;
  /// Global wall-clock budget in seconds across all rounds.
  std::optional<double> timeout_s;
  smt::SolverConfig solver;
  Rational epsilon = Rational(1, 1000);
  std::optional<Rational> horizon;
  bool symmetry_breaking = true;
  /// Writes the SMT-LIB text of every encoded round here (last one wins).
  std::string dump_smt;

  bool configured() const { return occurrences.has_value() || steps.has_value(); }
};

enum class Outcome { Plan, NoPlan, Timeout, Unknown };
std::string_view to_string(Outcome o);

/// CLI exit status of an outcome: 0, 10, 20, 30.
int exit_code(Outcome o);

struct SolveResult {
  Outcome outcome = Outcome::Unknown;
  plan::Plan plan;
  /// RCLL: encode_cost objective. Lifted: makespan.
  std::optional<Rational> cost;
  /// Step bound or occurrence map of the last round.
  std::string bound;
  int rounds = 0;
  double seconds = 0;
  std::string diagnostics;
};

/// A decoded plan failed validation; carries the report.
class InternalSoundnessError : public std::runtime_error {
 public:
  InternalSoundnessError(const std::string& message, plan::ValidationReport report)
      : std::runtime_error(message), report_(std::move(report)) {}
  const plan::ValidationReport& report() const { return report_; }

 private:
  plan::ValidationReport report_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InternalSoundnessError unless the plan validates.
void ensure_valid(const plan::Plan& plan, const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                  const Rational& epsilon);

/// Lifted engine on arbitrary PDDL.
SolveResult solve_pddl(const pddl::DomainModel& domain, const pddl::ProblemModel& problem, const PlannerConfig& config);

/// Any engine on an RCLL instance; the lifted engine runs on the exported PDDL.
SolveResult solve_rcll(const rcll::RcllInstance& inst, const PlannerConfig& config);

/// Formula of one bound without solving: the configured bound, or the first
/// deepening round.
smt::Formula encode_pddl(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                         const PlannerConfig& config);
smt::Formula encode_rcll(const rcll::RcllInstance& inst, const PlannerConfig& config);

/// Actions that can support a goal or condition literal, in domain order.
std::vector<std::string> relevant_actions(const pddl::DomainModel& domain, const pddl::ProblemModel& problem);

/// Lifted deepening schedule: round k (from 1) gives k instances of each
/// relevant action; empty once the cap is exceeded.
lifted::OccurrenceMap deepening_round(const std::vector<std::string>& relevant, int round);

/// Occurrences one RCLL instance needs, usable as a configured map.
lifted::OccurrenceMap rcll_occurrences(const rcll::RcllInstance& inst);

}  // namespace chronosat::pipeline
