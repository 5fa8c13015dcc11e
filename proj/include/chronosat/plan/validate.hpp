#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/pddl/model.hpp"
#include "chronosat/plan/plan.hpp"

namespace chronosat::plan {

enum class ValidationErrorKind { UnknownAction, ArityMismatch, UnsupportedConstruct };

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ValidationErrorKind kind() const { return kind_; }

 private:
  ValidationErrorKind kind_;
};

struct Violation {
  enum class Kind {
    Goal,       // goal literal false at the end
    Condition,  // condition reads a wrong value; `time` is the condition start
    Permanent,  // cannot be repaired by appending later steps
  };
  Kind kind = Kind::Permanent;
  Rational time;
  std::string description;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> trace;
  std::optional<Violation> first_violation;  // earliest violation
  std::vector<Violation> violations;
};

/// Discrete-event check of a timed plan with exact rationals.
///
/// An effect triggered at instant h is in transition over [h, h+eps] and its
/// value holds from h+eps. A condition over [a, b] holds when no effect on
/// its atom is triggered in (a-eps, b) and the latest effect triggered at or
/// before a-eps (or the initial state) gives the required value. Effects on
/// one atom must be triggered at least eps apart. At-start and at-end
/// conditions use [start, start] and [end, end], over-all conditions
/// [start+eps, end]. The goal is checked eps after the last happening.
ValidationReport validate(const Plan& plan, const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                          const Rational& epsilon);

/// Ground value of a static numeric function term such as `(travel a b)`.
using StaticValues = std::map<std::string, Rational>;
StaticValues static_values(const pddl::ProblemModel& problem);

/// Evaluates a numeric expression under a parameter binding. Returns nullopt
/// when a function value is undefined.
std::optional<Rational> evaluate_numeric(const pddl::NumericExpr& e, const std::map<std::string, std::string>& binding,
                                         const StaticValues& values, const std::optional<Rational>& duration = {});

/// Text key of a ground atom, e.g. `at r1 bs`.
std::string ground_key(const pddl::Atom& atom, const std::map<std::string, std::string>& binding);

}  // namespace chronosat::plan
