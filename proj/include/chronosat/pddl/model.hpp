#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chronosat/rational.hpp"

namespace chronosat::pddl {

struct TypedName {
  std::string name;
  std::string type = "object";
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Argument of an atom: a `?variable` or a constant/object name.
struct Term {
  bool is_variable = false;
  std::string name;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Numeric expression over static functions, numbers and `?duration`.
struct NumericExpr {
  enum class Kind { Number, Function, Duration, Add, Sub, Mul, Div };
  Kind kind = Kind::Number;
  Rational value;
  Atom function;                      // Kind::Function
  std::vector<NumericExpr> operands;  // arithmetic kinds

  static NumericExpr number(Rational v) { return {Kind::Number, v, {}, {}}; }
  friend bool operator==(const NumericExpr&, const NumericExpr&) = default;
};

enum class CompareOp { Lt, Le, Eq, Ge, Gt };

/// Condition AST. Parsed permissively; the chronicle translation rejects
/// anything that does not normalise to a conjunction of literals.
struct Formula {
  enum class Kind { And, Or, Not, Atom, Equals, Compare };
  Kind kind = Kind::And;
  std::vector<Formula> children;  // And, Or, Not
  Atom atom;                      // Atom
  Term lhs, rhs;                  // Equals
  CompareOp op = CompareOp::Eq;   // Compare
  NumericExpr left, right;        // Compare

  static Formula conjunction(std::vector<Formula> parts = {}) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(parts);
    return f;
  }
  static Formula of_atom(Atom a) {
    Formula f;
    f.kind = Kind::Atom;
    f.atom = std::move(a);
    return f;
  }
  static Formula negation(Formula inner) {
    Formula f;
    f.kind = Kind::Not;
    f.children.push_back(std::move(inner));
    return f;
  }
  friend bool operator==(const Formula&, const Formula&) = default;
};

struct Effect {
  bool positive = true;
  Atom atom;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

using FunctionDecl = PredicateDecl;

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Formula precondition = Formula::conjunction();
  std::vector<Effect> effects;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

enum class TimeSpec { AtStart, OverAll, AtEnd };

struct TimedCondition {
  TimeSpec when = TimeSpec::AtStart;
  Formula condition;
  friend bool operator==(const TimedCondition&, const TimedCondition&) = default;
};

struct TimedEffect {
  TimeSpec when = TimeSpec::AtStart;  // never OverAll
  Effect effect;
  friend bool operator==(const TimedEffect&, const TimedEffect&) = default;
};

/// One `(op ?duration expr)` clause of a duration constraint.
struct DurationBound {
  CompareOp op = CompareOp::Eq;  // Eq, Ge or Le
  NumericExpr expr;
  friend bool operator==(const DurationBound&, const DurationBound&) = default;
};

struct DurativeActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<DurationBound> duration;
  std::vector<TimedCondition> conditions;
  std::vector<TimedEffect> effects;
  friend bool operator==(const DurativeActionSchema&, const DurativeActionSchema&) = default;
};

struct DomainModel {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name with its parent type
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<FunctionDecl> functions;
  std::vector<ActionSchema> actions;
  std::vector<DurativeActionSchema> durative_actions;

  const PredicateDecl* find_predicate(const std::string& n) const;
  const FunctionDecl* find_function(const std::string& n) const;
  const ActionSchema* find_action(const std::string& n) const;
  const DurativeActionSchema* find_durative_action(const std::string& n) const;

  friend bool operator==(const DomainModel&, const DomainModel&) = default;
};

struct NumericFact {
  Atom function;  // ground
  Rational value;
  friend bool operator==(const NumericFact&, const NumericFact&) = default;
};

/// `(at <time> <literal>)` in the initial state.
struct TimedLiteral {
  Rational time;
  bool positive = true;
  Atom atom;
  friend bool operator==(const TimedLiteral&, const TimedLiteral&) = default;
};

struct Metric {
  bool minimize = true;
  NumericExpr expr;
  bool total_time = false;  // `(total-time)` as the metric expression
  friend bool operator==(const Metric&, const Metric&) = default;
};

struct ProblemModel {
  std::string name;
  std::string domain_name;
  std::vector<std::string> requirements;
  std::vector<TypedName> objects;
  std::vector<Atom> init;  // positive ground literals
  std::vector<NumericFact> numeric_init;
  std::vector<TimedLiteral> timed_literals;
  Formula goal = Formula::conjunction();
  std::optional<Metric> metric;

  friend bool operator==(const ProblemModel&, const ProblemModel&) = default;
};

}  // namespace chronosat::pddl
