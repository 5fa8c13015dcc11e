#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/pddl/model.hpp"
#include "chronosat/pddl/types.hpp"
#include "chronosat/rational.hpp"

namespace chronosat::chronicle {

enum class TranslateErrorKind { UnsupportedConstruct, NonConjunctiveGoal };

class TranslateError : public std::runtime_error {
 public:
  TranslateError(TranslateErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  TranslateErrorKind kind() const { return kind_; }

 private:
  TranslateErrorKind kind_;
};

/// Boolean state function lifted from a predicate.
struct StateFunction {
  std::string name;
  std::vector<std::string> parameter_types;
  std::vector<std::string> codomain = {"true", "false"};
  /// No effect in the domain (or timed literal in the problem) changes it.
  bool is_static = false;
};

enum class VarKind { Timepoint, Symbol, Boolean, Duration };

struct Variable {
  int id = -1;
  VarKind kind = VarKind::Timepoint;
  std::string name;
  std::string type;  // object type for symbol variables
};

/// Symbol argument: a variable or a named constant.
struct SymRef {
  int var = -1;
  std::string constant;
  bool is_var() const { return var >= 0; }
  friend bool operator==(const SymRef&, const SymRef&) = default;
};

/// Timepoint variable plus a rational offset; var = -1 is the time origin.
struct TimeRef {
  int var = -1;
  Rational offset;
  friend bool operator==(const TimeRef&, const TimeRef&) = default;
};

enum class StatementKind { Condition, Effect };

struct Statement {
  StatementKind kind = StatementKind::Condition;
  int function = -1;  // index into the state function list
  std::vector<SymRef> args;
  bool value = true;
  TimeRef start;  // condition: persistence start; effect: trigger instant
  TimeRef end;    // condition: persistence end; effect: instant the value holds
};

struct LinearTerm {
  int var;
  Rational coef;
};

struct Constraint {
  enum class Kind {
    Linear,           // sum(coef * var) + constant  (op)  0, op in {Le, Lt, Eq}
    SymEqual,         // a = b
    SymNotEqual,      // a != b
    StaticCompare,    // numeric comparison over static functions
    Duration,         // `target op expr` with expr over static functions
  };
  Kind kind = Kind::Linear;
  std::vector<LinearTerm> terms;
  Rational constant;
  pddl::CompareOp op = pddl::CompareOp::Le;
  SymRef a, b;
  pddl::NumericExpr left, right;  // StaticCompare (left op right), Duration (right only)
  int target = -1;                // Duration variable
  std::map<std::string, int> binding;  // PDDL parameter name -> symbol variable
};

/// Variables, constraints and statements, all guarded by `presence`.
struct Chronicle {
  static constexpr int kAlwaysPresent = -1;

  std::string action;  // empty for the problem chronicle
  int instance = -1;
  int presence = kAlwaysPresent;
  int start = -1;
  int end = -1;
  std::vector<std::string> param_names;
  std::vector<int> params;  // symbol variables, one per action parameter
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<Statement> conditions;
  std::vector<Statement> effects;

  bool is_problem() const { return action.empty(); }
  std::string label() const;
  const Variable& variable(int id) const;
  /// Every id referenced by constraints and statements.
  std::set<int> referenced() const;
};

/// Source of globally unique variable ids for one planning session.
class IdAllocator {
 public:
  int next() { return next_++; }
  int peek() const { return next_; }

 private:
  int next_ = 0;
};

struct DomainTranslation {
  std::vector<StateFunction> functions;
  std::vector<Chronicle> templates;  // one per action, instantaneous first
  Rational epsilon;

  int function_index(const std::string& name) const;
  const Chronicle* find_template(const std::string& action) const;
};

/// Lifts predicates to Boolean state functions and actions to templates.
/// Instantaneous actions share one timepoint for start and end; durative
/// ones get start/end/duration variables linked by `end = start + duration`.
/// Conditions: at-start [s, s], over-all [s+eps, e], at-end [e, e].
/// Effects triggered at t have the transition interval [t, t+eps].
DomainTranslation translate_domain(const pddl::DomainModel& domain, const Rational& epsilon, IdAllocator& ids);

/// Problem side of the translation. `functions` is a copy of the domain's
/// list with static flags cleared for atoms changed by timed literals.
struct ProblemTranslation {
  Chronicle chronicle;
  std::vector<StateFunction> functions;
  pddl::ObjectTable objects;
  std::map<std::string, Rational> static_values;
  std::set<std::string> init_atoms;  // ground keys, e.g. "at r1 bs"
  Rational max_timed_literal;
  int origin = -1;
  int horizon = -1;  // goal conditions hold over [horizon+eps, horizon+eps]
};

ProblemTranslation translate_problem(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                                     const DomainTranslation& translation, IdAllocator& ids);

/// Fresh copy of a template with injectively renamed variables and a fresh
/// presence variable.
Chronicle instantiate(const Chronicle& tmpl, int instance_id, IdAllocator& ids);

/// Human-readable listing, one statement per line.
std::string debug_dump(const Chronicle& c, const std::vector<StateFunction>& functions);

}  // namespace chronosat::chronicle
