#include "chronosat/plan/validate.hpp"

#include <algorithm>
#include <set>

#include "chronosat/pddl/parser.hpp"
#include "chronosat/pddl/types.hpp"

namespace chronosat::plan {

using namespace pddl;

std::string ground_key(const Atom& atom, const std::map<std::string, std::string>& binding) {
  std::string key = atom.predicate;
  for (const auto& t : atom.args) {
    key += ' ';
    if (t.is_variable) {
      auto it = binding.find(t.name);
      key += it == binding.end() ? "?" + t.name : it->second;
    } else {
      key += t.name;
    }
  }
  return key;
}

StaticValues static_values(const ProblemModel& problem) {
  StaticValues out;
  for (const auto& f : problem.numeric_init) out[ground_key(f.function, {})] = f.value;
  return out;
}

std::optional<Rational> evaluate_numeric(const NumericExpr& e, const std::map<std::string, std::string>& binding,
                                         const StaticValues& values, const std::optional<Rational>& duration) {
  using K = NumericExpr::Kind;
  switch (e.kind) {
    case K::Number: return e.value;
    case K::Duration: return duration;
    case K::Function: {
      auto it = values.find(ground_key(e.function, binding));
      if (it == values.end()) return std::nullopt;
      return it->second;
    }
    default: break;
  }
  std::vector<Rational> xs;
  for (const auto& o : e.operands) {
    auto v = evaluate_numeric(o, binding, values, duration);
    if (!v) return std::nullopt;
    xs.push_back(*v);
  }
  if (e.kind == K::Sub && xs.size() == 1) return -xs[0];
  Rational acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    switch (e.kind) {
      case K::Add: acc += xs[i]; break;
      case K::Sub: acc -= xs[i]; break;
      case K::Mul: acc *= xs[i]; break;
      case K::Div:
        if (xs[i].is_zero()) return std::nullopt;
        acc /= xs[i];
        break;
      default: break;
    }
  }
  return acc;
}

namespace {

struct GroundEffect {
  Rational h;
  std::string atom;
  bool value;
  std::string source;
};

struct GroundCondition {
  Rational cs, ce;
  std::string atom;
  bool value;
  std::string source;
};

bool compare(CompareOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Eq: return a == b;
    case CompareOp::Ge: return a >= b;
    case CompareOp::Gt: return a > b;
  }
  return false;
}

std::string term_value(const Term& t, const std::map<std::string, std::string>& binding) {
  if (!t.is_variable) return t.name;
  auto it = binding.find(t.name);
  return it == binding.end() ? "?" + t.name : it->second;
}

class Checker {
 public:
  Checker(const DomainModel& d, const ProblemModel& p, const Rational& eps)
      : domain_(d), problem_(p), eps_(eps), objects_(d, p), values_(static_values(p)) {
    for (const auto& a : p.init) init_.insert(ground_key(a, {}));
  }

  ValidationReport run(const Plan& plan) {
    Rational last_happening(0);
    for (const auto& til : problem_.timed_literals) {
      effects_.push_back({til.time, ground_key(til.atom, {}), til.positive, "timed literal"});
      last_happening = max(last_happening, til.time);
    }
    for (const auto& step : plan.steps) {
      add_step(step);
      last_happening = max(last_happening, step.start + step.duration);
    }
    check_consistency();
    for (const auto& c : conditions_) check_condition(c, Violation::Kind::Condition);
    Rational goal_time = last_happening + eps_;
    std::vector<GroundCondition> goal;
    std::string src = "goal";
    literals(problem_.goal, {}, goal_time, goal_time, src, goal, true);
    for (const auto& g : goal) check_condition(g, Violation::Kind::Goal);

    std::stable_sort(events_.begin(), events_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [t, line] : events_) report_.trace.push_back(line);
    report_.valid = report_.violations.empty();
    for (const auto& v : report_.violations) {
      if (!report_.first_violation || v.time < report_.first_violation->time) report_.first_violation = v;
    }
    return std::move(report_);
  }

 private:
  void violate(Violation::Kind kind, const Rational& time, std::string what) {
    events_.emplace_back(time, time.decimal_str() + ": VIOLATION " + what);
    report_.violations.push_back(Violation{kind, time, std::move(what)});
  }

  // Flattens a condition into ground literals; static parts are decided now.
  void literals(const Formula& f, const std::map<std::string, std::string>& binding, const Rational& cs,
                const Rational& ce, const std::string& source, std::vector<GroundCondition>& out, bool positive) {
    switch (f.kind) {
      case Formula::Kind::And:
        if (!positive && !f.children.empty()) {
          throw ValidationError(ValidationErrorKind::UnsupportedConstruct, "negated conjunction in " + source);
        }
        for (const auto& c : f.children) literals(c, binding, cs, ce, source, out, positive);
        return;
      case Formula::Kind::Not:
        literals(f.children.at(0), binding, cs, ce, source, out, !positive);
        return;
      case Formula::Kind::Atom:
        out.push_back({cs, ce, ground_key(f.atom, binding), positive, source});
        return;
      case Formula::Kind::Equals: {
        bool same = term_value(f.lhs, binding) == term_value(f.rhs, binding);
        if (same != positive) {
          violate(Violation::Kind::Permanent, cs, source + ": " + (positive ? "" : "(not ") + print_formula(f) +
                                                      (positive ? "" : ")") + " is false");
        }
        return;
      }
      case Formula::Kind::Compare: {
        auto l = evaluate_numeric(f.left, binding, values_);
        auto r = evaluate_numeric(f.right, binding, values_);
        if (!l || !r) {
          violate(Violation::Kind::Permanent, cs, source + ": undefined function value in " + print_formula(f));
          return;
        }
        if (compare(f.op, *l, *r) != positive) {
          violate(Violation::Kind::Permanent, cs, source + ": comparison " + print_formula(f) + " fails");
        }
        return;
      }
      case Formula::Kind::Or:
        throw ValidationError(ValidationErrorKind::UnsupportedConstruct, "disjunctive condition in " + source);
    }
  }

  void add_step(const PlanStep& step) {
    std::string label = "(" + step.action;
    for (const auto& a : step.args) label += " " + a;
    label += ")@" + step.start.decimal_str();

    const auto* inst = domain_.find_action(step.action);
    const auto* dur = domain_.find_durative_action(step.action);
    if (!inst && !dur) throw ValidationError(ValidationErrorKind::UnknownAction, "unknown action '" + step.action + "'");
    const auto& params = inst ? inst->params : dur->params;
    if (params.size() != step.args.size()) {
      throw ValidationError(ValidationErrorKind::ArityMismatch,
                            "'" + step.action + "' expects " + std::to_string(params.size()) + " arguments, got " +
                                std::to_string(step.args.size()));
    }
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < params.size(); ++i) {
      binding[params[i].name] = step.args[i];
      auto id = objects_.find(step.args[i]);
      if (!id) {
        violate(Violation::Kind::Permanent, step.start, label + ": unknown object '" + step.args[i] + "'");
      } else if (!objects_.has_type(*id, params[i].type)) {
        violate(Violation::Kind::Permanent, step.start,
                label + ": '" + step.args[i] + "' is not of type " + params[i].type);
      }
    }
    if (step.start < Rational(0)) violate(Violation::Kind::Permanent, step.start, label + ": negative start time");
    events_.emplace_back(step.start, step.start.decimal_str() + ": start " + label + " [" +
                                         step.duration.decimal_str() + "]");

    if (inst) {
      if (!step.duration.is_zero()) {
        violate(Violation::Kind::Permanent, step.start, label + ": instantaneous action with nonzero duration");
      }
      literals(inst->precondition, binding, step.start, step.start, label, conditions_, true);
      for (const auto& e : inst->effects) {
        effects_.push_back({step.start, ground_key(e.atom, binding), e.positive, label});
      }
      return;
    }
    Rational end = step.start + step.duration;
    for (const auto& b : dur->duration) {
      auto v = evaluate_numeric(b.expr, binding, values_);
      if (!v) {
        violate(Violation::Kind::Permanent, step.start, label + ": duration depends on an undefined function value");
      } else if (!compare(b.op, step.duration, *v)) {
        violate(Violation::Kind::Permanent, step.start,
                label + ": duration " + step.duration.decimal_str() + " violates ?duration constraint against " +
                    v->decimal_str());
      }
    }
    bool has_over_all = false;
    for (const auto& c : dur->conditions) {
      switch (c.when) {
        case TimeSpec::AtStart: literals(c.condition, binding, step.start, step.start, label, conditions_, true); break;
        case TimeSpec::AtEnd: literals(c.condition, binding, end, end, label, conditions_, true); break;
        case TimeSpec::OverAll:
          has_over_all = true;
          literals(c.condition, binding, step.start + eps_, end, label, conditions_, true);
          break;
      }
    }
    if (has_over_all && step.duration < eps_) {
      violate(Violation::Kind::Permanent, step.start, label + ": over-all condition needs a duration of at least epsilon");
    }
    for (const auto& e : dur->effects) {
      Rational h = e.when == TimeSpec::AtStart ? step.start : end;
      effects_.push_back({h, ground_key(e.effect.atom, binding), e.effect.positive, label});
    }
  }

  void check_consistency() {
    std::map<std::string, std::vector<const GroundEffect*>> by_atom;
    for (const auto& e : effects_) {
      by_atom[e.atom].push_back(&e);
      events_.emplace_back(e.h, e.h.decimal_str() + ": apply " + std::string(e.value ? "" : "(not ") + "(" + e.atom +
                                    ")" + (e.value ? "" : ")") + " from " + e.source);
    }
    for (auto& [atom, list] : by_atom) {
      std::stable_sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->h < b->h; });
      for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i]->h - list[i - 1]->h < eps_) {
          violate(Violation::Kind::Permanent, list[i - 1]->h,
                  "interfering effects on (" + atom + ") from " + list[i - 1]->source + " at " +
                      list[i - 1]->h.decimal_str() + " and " + list[i]->source + " at " + list[i]->h.decimal_str());
        }
      }
      timeline_[atom] = list;
    }
  }

  void check_condition(const GroundCondition& c, Violation::Kind kind) {
    std::string lit = std::string(c.value ? "" : "(not ") + "(" + c.atom + ")" + (c.value ? "" : ")");
    std::string where = c.source + " requires " + lit + " over [" + c.cs.decimal_str() + ", " + c.ce.decimal_str() + "]";
    const GroundEffect* support = nullptr;
    auto it = timeline_.find(c.atom);
    if (it != timeline_.end()) {
      for (const auto* e : it->second) {
        if (e->h > c.cs - eps_ && e->h < c.ce) {
          violate(Violation::Kind::Permanent, c.cs,
                  where + " but " + e->source + " changes it at " + e->h.decimal_str());
          return;
        }
        if (e->h <= c.cs - eps_) support = e;
      }
    }
    bool value = support ? support->value : init_.count(c.atom) > 0;
    if (value != c.value) {
      violate(kind, c.cs,
              kind == Violation::Kind::Goal ? "goal unsatisfied: " + lit
                                            : where + " but it is " + (value ? "true" : "false"));
      return;
    }
    events_.emplace_back(c.cs, c.cs.decimal_str() + ": ok " + where);
  }

  const DomainModel& domain_;
  const ProblemModel& problem_;
  Rational eps_;
  ObjectTable objects_;
  StaticValues values_;
  std::set<std::string> init_;
  std::vector<GroundEffect> effects_;
  std::vector<GroundCondition> conditions_;
  std::map<std::string, std::vector<const GroundEffect*>> timeline_;
  std::vector<std::pair<Rational, std::string>> events_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Plan& plan, const DomainModel& domain, const ProblemModel& problem,
                          const Rational& epsilon) {
  if (epsilon <= Rational(0)) throw std::invalid_argument("epsilon must be positive");
  return Checker(domain, problem, epsilon).run(plan);
}

}  // namespace chronosat::plan
