#include "chronosat/chronicle/chronicle.hpp"

#include <algorithm>
#include <sstream>

#include "chronosat/pddl/parser.hpp"
#include "chronosat/plan/validate.hpp"

namespace chronosat::chronicle {

using pddl::CompareOp;
using pddl::Formula;
using pddl::TimeSpec;

std::string Chronicle::label() const {
  if (is_problem()) return "problem";
  return action + "#" + std::to_string(instance);
}

const Variable& Chronicle::variable(int id) const {
  for (const auto& v : variables) {
    if (v.id == id) return v;
  }
  throw std::out_of_range("chronicle " + label() + " has no variable " + std::to_string(id));
}

std::set<int> Chronicle::referenced() const {
  std::set<int> out;
  auto sym = [&](const SymRef& r) {
    if (r.is_var()) out.insert(r.var);
  };
  auto time = [&](const TimeRef& t) {
    if (t.var >= 0) out.insert(t.var);
  };
  if (presence >= 0) out.insert(presence);
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) out.insert(t.var);
    sym(c.a);
    sym(c.b);
    if (c.target >= 0) out.insert(c.target);
    for (const auto& [name, v] : c.binding) out.insert(v);
  }
  for (const auto* list : {&conditions, &effects}) {
    for (const auto& s : *list) {
      for (const auto& a : s.args) sym(a);
      time(s.start);
      time(s.end);
    }
  }
  return out;
}

int DomainTranslation::function_index(const std::string& name) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Chronicle* DomainTranslation::find_template(const std::string& action) const {
  for (const auto& t : templates) {
    if (t.action == action) return &t;
  }
  return nullptr;
}

namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw TranslateError(TranslateErrorKind::UnsupportedConstruct, what);
}

Constraint linear(std::vector<LinearTerm> terms, Rational constant, CompareOp op) {
  Constraint c;
  c.kind = Constraint::Kind::Linear;
  c.terms = std::move(terms);
  c.constant = constant;
  c.op = op;
  return c;
}

bool uses_functions(const pddl::NumericExpr& e) {
  if (e.kind == pddl::NumericExpr::Kind::Function) return true;
  return std::any_of(e.operands.begin(), e.operands.end(), uses_functions);
}

class TemplateBuilder {
 public:
  TemplateBuilder(const DomainTranslation& tr, IdAllocator& ids) : tr_(tr), ids_(ids) {}

  int var(Chronicle& c, VarKind kind, const std::string& name, const std::string& type = {}) {
    Variable v{ids_.next(), kind, name, type};
    c.variables.push_back(v);
    return v.id;
  }

  SymRef term(const pddl::Term& t) const {
    if (!t.is_variable) return SymRef{-1, t.name};
    auto it = params_.find(t.name);
    if (it == params_.end()) unsupported("free variable ?" + t.name);
    return SymRef{it->second, {}};
  }

  Statement statement(StatementKind kind, const pddl::Atom& atom, bool value, TimeRef s, TimeRef e) const {
    Statement st;
    st.kind = kind;
    st.function = tr_.function_index(atom.predicate);
    if (st.function < 0) unsupported("undeclared predicate " + atom.predicate);
    for (const auto& a : atom.args) st.args.push_back(term(a));
    st.value = value;
    st.start = s;
    st.end = e;
    return st;
  }

  void conditions(Chronicle& c, const Formula& f, bool positive, TimeRef s, TimeRef e) {
    switch (f.kind) {
      case Formula::Kind::And:
        if (!positive && !f.children.empty()) unsupported("negated conjunction in " + c.action);
        for (const auto& ch : f.children) conditions(c, ch, positive, s, e);
        return;
      case Formula::Kind::Not: conditions(c, f.children.at(0), !positive, s, e); return;
      case Formula::Kind::Atom:
        c.conditions.push_back(statement(StatementKind::Condition, f.atom, positive, s, e));
        return;
      case Formula::Kind::Equals: {
        Constraint k;
        k.kind = positive ? Constraint::Kind::SymEqual : Constraint::Kind::SymNotEqual;
        k.a = term(f.lhs);
        k.b = term(f.rhs);
        c.constraints.push_back(std::move(k));
        return;
      }
      case Formula::Kind::Compare: {
        Constraint k;
        k.kind = Constraint::Kind::StaticCompare;
        k.op = f.op;
        k.left = f.left;
        k.right = f.right;
        k.binding = params_;
        if (!positive) {
          // not (l op r)  <=>  (r op' l) with the strict/non-strict flip
          switch (f.op) {
            case CompareOp::Lt: k.op = CompareOp::Ge; break;
            case CompareOp::Le: k.op = CompareOp::Gt; break;
            case CompareOp::Ge: k.op = CompareOp::Lt; break;
            case CompareOp::Gt: k.op = CompareOp::Le; break;
            case CompareOp::Eq: unsupported("negated numeric equality in " + c.action);
          }
        }
        c.constraints.push_back(std::move(k));
        return;
      }
      case Formula::Kind::Or: unsupported("disjunctive condition in " + c.action);
    }
  }

  Chronicle build(const std::string& name, const std::vector<pddl::TypedName>& params) {
    Chronicle c;
    c.action = name;
    c.presence = var(c, VarKind::Boolean, "presence");
    params_.clear();
    for (const auto& p : params) {
      int v = var(c, VarKind::Symbol, p.name, p.type);
      params_[p.name] = v;
      c.param_names.push_back(p.name);
      c.params.push_back(v);
    }
    return c;
  }

  Chronicle instantaneous(const pddl::ActionSchema& a) {
    Chronicle c = build(a.name, a.params);
    c.start = c.end = var(c, VarKind::Timepoint, "start");
    c.constraints.push_back(linear({{c.start, Rational(-1)}}, Rational(0), CompareOp::Le));
    TimeRef s{c.start, Rational(0)};
    conditions(c, a.precondition, true, s, s);
    for (const auto& e : a.effects) {
      c.effects.push_back(statement(StatementKind::Effect, e.atom, e.positive, s, TimeRef{c.start, tr_.epsilon}));
    }
    return c;
  }

  Chronicle durative(const pddl::DurativeActionSchema& a) {
    Chronicle c = build(a.name, a.params);
    c.start = var(c, VarKind::Timepoint, "start");
    c.end = var(c, VarKind::Timepoint, "end");
    int d = var(c, VarKind::Duration, "duration");
    c.constraints.push_back(linear({{c.start, Rational(-1)}}, Rational(0), CompareOp::Le));
    c.constraints.push_back(linear({{d, Rational(-1)}}, Rational(0), CompareOp::Le));
    c.constraints.push_back(
        linear({{c.end, Rational(1)}, {c.start, Rational(-1)}, {d, Rational(-1)}}, Rational(0), CompareOp::Eq));
    for (const auto& b : a.duration) {
      if (!uses_functions(b.expr)) {
        auto v = plan::evaluate_numeric(b.expr, {}, {});
        if (!v) unsupported("duration of " + a.name + " cannot be evaluated");
        // d op v as a constraint against zero; Ge/Gt are flipped
        if (b.op == CompareOp::Ge || b.op == CompareOp::Gt) {
          c.constraints.push_back(
              linear({{d, Rational(-1)}}, *v, b.op == CompareOp::Ge ? CompareOp::Le : CompareOp::Lt));
        } else {
          c.constraints.push_back(linear({{d, Rational(1)}}, -*v, b.op));
        }
        continue;
      }
      Constraint k;
      k.kind = Constraint::Kind::Duration;
      k.op = b.op;
      k.right = b.expr;
      k.target = d;
      k.binding = params_;
      c.constraints.push_back(std::move(k));
    }
    TimeRef s{c.start, Rational(0)};
    TimeRef e{c.end, Rational(0)};
    bool over_all = false;
    for (const auto& cond : a.conditions) {
      switch (cond.when) {
        case TimeSpec::AtStart: conditions(c, cond.condition, true, s, s); break;
        case TimeSpec::AtEnd: conditions(c, cond.condition, true, e, e); break;
        case TimeSpec::OverAll:
          over_all = true;
          conditions(c, cond.condition, true, TimeRef{c.start, tr_.epsilon}, e);
          break;
      }
    }
    if (over_all) {
      c.constraints.push_back(linear({{c.start, Rational(1)}, {c.end, Rational(-1)}}, tr_.epsilon, CompareOp::Le));
    }
    for (const auto& eff : a.effects) {
      int at = eff.when == TimeSpec::AtStart ? c.start : c.end;
      c.effects.push_back(statement(StatementKind::Effect, eff.effect.atom, eff.effect.positive,
                                    TimeRef{at, Rational(0)}, TimeRef{at, tr_.epsilon}));
    }
    return c;
  }

 private:
  const DomainTranslation& tr_;
  IdAllocator& ids_;
  std::map<std::string, int> params_;
};

void groundings(const pddl::ObjectTable& objects, const std::vector<std::string>& types, std::size_t i,
                std::vector<std::string>& cur, std::vector<std::vector<std::string>>& out) {
  if (i == types.size()) {
    out.push_back(cur);
    return;
  }
  for (int id : objects.of_type(types[i])) {
    cur.push_back(objects.name(id));
    groundings(objects, types, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

DomainTranslation translate_domain(const pddl::DomainModel& domain, const Rational& epsilon, IdAllocator& ids) {
  if (epsilon <= Rational(0)) throw std::invalid_argument("epsilon must be positive");
  DomainTranslation tr;
  tr.epsilon = epsilon;
  std::set<std::string> changed;
  for (const auto& a : domain.actions) {
    for (const auto& e : a.effects) changed.insert(e.atom.predicate);
  }
  for (const auto& a : domain.durative_actions) {
    for (const auto& e : a.effects) changed.insert(e.effect.atom.predicate);
  }
  for (const auto& p : domain.predicates) {
    StateFunction f;
    f.name = p.name;
    for (const auto& t : p.params) f.parameter_types.push_back(t.type);
    f.is_static = !changed.count(p.name);
    tr.functions.push_back(std::move(f));
  }
  TemplateBuilder builder(tr, ids);
  for (const auto& a : domain.actions) tr.templates.push_back(builder.instantaneous(a));
  for (const auto& a : domain.durative_actions) tr.templates.push_back(builder.durative(a));
  return tr;
}

ProblemTranslation translate_problem(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                                     const DomainTranslation& translation, IdAllocator& ids) {
  ProblemTranslation out;
  out.functions = translation.functions;
  out.objects = pddl::ObjectTable(domain, problem);
  out.static_values = plan::static_values(problem);
  for (const auto& a : problem.init) out.init_atoms.insert(plan::ground_key(a, {}));
  for (const auto& til : problem.timed_literals) {
    int f = translation.function_index(til.atom.predicate);
    if (f >= 0) out.functions[static_cast<std::size_t>(f)].is_static = false;
    out.max_timed_literal = max(out.max_timed_literal, til.time);
  }

  Chronicle& c = out.chronicle;
  auto var = [&](VarKind kind, const std::string& name) {
    Variable v{ids.next(), kind, name, {}};
    c.variables.push_back(v);
    return v.id;
  };
  out.origin = var(VarKind::Timepoint, "origin");
  out.horizon = var(VarKind::Timepoint, "horizon");
  c.start = out.origin;
  c.end = out.horizon;
  c.constraints.push_back(linear({{out.origin, Rational(1)}}, Rational(0), CompareOp::Eq));

  auto atom_statement = [&](StatementKind kind, const pddl::Atom& atom, bool value, TimeRef s, TimeRef e) {
    Statement st;
    st.kind = kind;
    st.function = translation.function_index(atom.predicate);
    for (const auto& a : atom.args) st.args.push_back(SymRef{-1, a.name});
    st.value = value;
    st.start = s;
    st.end = e;
    return st;
  };

  TimeRef at_origin{out.origin, Rational(0)};
  for (const auto& a : problem.init) {
    c.effects.push_back(atom_statement(StatementKind::Effect, a, true, at_origin, at_origin));
  }
  // Closed world for fluents; static functions are decided against init directly.
  for (const auto& f : out.functions) {
    if (f.is_static) continue;
    std::vector<std::vector<std::string>> all;
    std::vector<std::string> cur;
    groundings(out.objects, f.parameter_types, 0, cur, all);
    for (const auto& args : all) {
      std::string key = f.name;
      for (const auto& a : args) key += " " + a;
      if (out.init_atoms.count(key)) continue;
      pddl::Atom atom{f.name, {}};
      for (const auto& a : args) atom.args.push_back(pddl::Term{false, a});
      c.effects.push_back(atom_statement(StatementKind::Effect, atom, false, at_origin, at_origin));
    }
  }
  for (const auto& til : problem.timed_literals) {
    c.effects.push_back(atom_statement(StatementKind::Effect, til.atom, til.positive, TimeRef{out.origin, til.time},
                                       TimeRef{out.origin, til.time + translation.epsilon}));
  }

  TimeRef goal_at{out.horizon, translation.epsilon};
  std::vector<std::pair<const Formula*, bool>> stack{{&problem.goal, true}};
  while (!stack.empty()) {
    auto [f, positive] = stack.back();
    stack.pop_back();
    switch (f->kind) {
      case Formula::Kind::And:
        if (!positive && !f->children.empty()) {
          throw TranslateError(TranslateErrorKind::NonConjunctiveGoal, "goal contains a negated conjunction");
        }
        for (auto it = f->children.rbegin(); it != f->children.rend(); ++it) stack.push_back({&*it, positive});
        break;
      case Formula::Kind::Not: stack.push_back({&f->children.at(0), !positive}); break;
      case Formula::Kind::Atom:
        c.conditions.push_back(atom_statement(StatementKind::Condition, f->atom, positive, goal_at, goal_at));
        break;
      case Formula::Kind::Equals:
        if ((f->lhs.name == f->rhs.name) != positive) {
          c.constraints.push_back(linear({}, Rational(1), CompareOp::Le));
        }
        break;
      case Formula::Kind::Compare:
      case Formula::Kind::Or:
        throw TranslateError(TranslateErrorKind::NonConjunctiveGoal,
                             "goal must be a conjunction of literals: " + pddl::print_formula(*f));
    }
  }
  return out;
}

Chronicle instantiate(const Chronicle& tmpl, int instance_id, IdAllocator& ids) {
  Chronicle c = tmpl;
  c.instance = instance_id;
  std::map<int, int> rename;
  for (auto& v : c.variables) {
    int fresh = ids.next();
    rename[v.id] = fresh;
    v.id = fresh;
  }
  auto map_id = [&](int& id) {
    if (id >= 0) id = rename.at(id);
  };
  map_id(c.presence);
  map_id(c.start);
  map_id(c.end);
  for (auto& p : c.params) map_id(p);
  for (auto& k : c.constraints) {
    for (auto& t : k.terms) map_id(t.var);
    map_id(k.a.var);
    map_id(k.b.var);
    map_id(k.target);
    for (auto& [name, v] : k.binding) map_id(v);
  }
  for (auto* list : {&c.conditions, &c.effects}) {
    for (auto& s : *list) {
      for (auto& a : s.args) map_id(a.var);
      map_id(s.start.var);
      map_id(s.end.var);
    }
  }
  return c;
}

std::string debug_dump(const Chronicle& c, const std::vector<StateFunction>& functions) {
  std::ostringstream os;
  auto vname = [&](int id) { return "v" + std::to_string(id); };
  auto sym = [&](const SymRef& r) { return r.is_var() ? vname(r.var) : r.constant; };
  auto time = [&](const TimeRef& t) {
    std::string base = t.var >= 0 ? vname(t.var) : "0";
    if (t.offset.is_zero()) return base;
    return base + (t.offset.sign() > 0 ? "+" : "") + t.offset.decimal_str();
  };
  os << "chronicle " << c.label() << " presence=" << (c.presence >= 0 ? vname(c.presence) : "true") << "\n";
  static const char* kinds[] = {"timepoint", "symbol", "boolean", "duration"};
  for (const auto& v : c.variables) {
    os << "  var " << vname(v.id) << " " << kinds[static_cast<int>(v.kind)] << " " << v.name;
    if (!v.type.empty()) os << " : " << v.type;
    os << "\n";
  }
  static const char* ops[] = {"<", "<=", "=", ">=", ">"};
  for (const auto& k : c.constraints) {
    os << "  constraint ";
    switch (k.kind) {
      case Constraint::Kind::Linear:
        for (const auto& t : k.terms) os << t.coef.decimal_str() << "*" << vname(t.var) << " + ";
        os << k.constant.decimal_str() << " " << ops[static_cast<int>(k.op)] << " 0";
        break;
      case Constraint::Kind::SymEqual: os << sym(k.a) << " = " << sym(k.b); break;
      case Constraint::Kind::SymNotEqual: os << sym(k.a) << " != " << sym(k.b); break;
      case Constraint::Kind::StaticCompare:
        os << pddl::print_numeric(k.left) << " " << ops[static_cast<int>(k.op)] << " " << pddl::print_numeric(k.right);
        break;
      case Constraint::Kind::Duration:
        os << vname(k.target) << " " << ops[static_cast<int>(k.op)] << " " << pddl::print_numeric(k.right);
        break;
    }
    os << "\n";
  }
  for (const auto* list : {&c.conditions, &c.effects}) {
    for (const auto& s : *list) {
      os << "  " << (s.kind == StatementKind::Condition ? "condition" : "effect") << " [" << time(s.start) << ", "
         << time(s.end) << "] " << functions.at(static_cast<std::size_t>(s.function)).name << "(";
      for (std::size_t i = 0; i < s.args.size(); ++i) os << (i ? ", " : "") << sym(s.args[i]);
      os << ") = " << (s.value ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

}  // namespace chronosat::chronicle
