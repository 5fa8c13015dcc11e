#include "chronosat/lifted/encoder.hpp"

#include <algorithm>
#include <sstream>

namespace chronosat::lifted {

using chronicle::Chronicle;
using chronicle::Constraint;
using chronicle::Statement;
using chronicle::SymRef;
using chronicle::TimeRef;
using chronicle::VarKind;
using pddl::CompareOp;
using smt::Sort;
using smt::Term;

OccurrenceMap parse_occurrences(const std::string& text) {
  OccurrenceMap out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected action=count, got '" + item + "'");
    std::string name = item.substr(0, eq);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    std::size_t used = 0;
    int count = std::stoi(item.substr(eq + 1), &used);
    if (used != item.size() - eq - 1 || count < 0) throw std::invalid_argument("bad count in '" + item + "'");
    out.emplace_back(name, count);
  }
  return out;
}

std::string format_occurrences(const OccurrenceMap& occ) {
  std::string out;
  for (const auto& [name, n] : occ) {
    if (!out.empty()) out += ",";
    out += name + "=" + std::to_string(n);
  }
  return out;
}

BoundedProblem build_bounded(const chronicle::DomainTranslation& domain, const chronicle::ProblemTranslation& problem,
                             const OccurrenceMap& occurrences, chronicle::IdAllocator& ids) {
  BoundedProblem bp;
  bp.problem = problem.chronicle;
  bp.occurrences = occurrences;
  bp.functions = problem.functions;
  bp.objects = problem.objects;
  bp.static_values = problem.static_values;
  bp.init_atoms = problem.init_atoms;
  bp.max_timed_literal = problem.max_timed_literal;
  bp.epsilon = domain.epsilon;
  bp.horizon_var = problem.horizon;
  for (const auto& [name, count] : occurrences) {
    const Chronicle* tmpl = domain.find_template(name);
    if (!tmpl) throw LiftedError(LiftedErrorKind::UnknownAction, "unknown action '" + name + "'");
    if (count < 0) throw std::invalid_argument("negative occurrence count for " + name);
    int base = 0;
    for (const auto& c : bp.instances) base += c.action == name;
    for (int i = 0; i < count; ++i) bp.instances.push_back(chronicle::instantiate(*tmpl, base + i, ids));
  }
  return bp;
}

namespace {

int duration_var(const Chronicle& c) {
  for (const auto& v : c.variables) {
    if (v.kind == VarKind::Duration) return v.id;
  }
  return -1;
}

void collect_params(const pddl::NumericExpr& e, std::set<std::string>& out) {
  if (e.kind == pddl::NumericExpr::Kind::Function) {
    for (const auto& t : e.function.args) {
      if (t.is_variable) out.insert(t.name);
    }
  }
  for (const auto& o : e.operands) collect_params(o, out);
}

bool holds(CompareOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Eq: return a == b;
    case CompareOp::Ge: return a >= b;
    case CompareOp::Gt: return a > b;
  }
  return false;
}

Term compare(CompareOp op, const Term& a, const Term& b) {
  switch (op) {
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Eq: return smt::eq(a, b);
    case CompareOp::Ge: return a >= b;
    case CompareOp::Gt: return a > b;
  }
  return Term();
}

/// Every assignment of objects to the given parameters of chronicle `c`.
struct Binding {
  std::map<std::string, std::string> names;  // parameter -> object
  std::vector<std::pair<int, int>> vars;     // symbol variable -> object id
};

class Encoder {
 public:
  Encoder(const BoundedProblem& bp, const EncodeOptions& options) : bp_(bp), options_(options) {}

  EncodingArtifact run() {
    art_.horizon = bp_.horizon ? *bp_.horizon : default_horizon(bp_);
    if (art_.horizon < bp_.max_timed_literal) art_.horizon = bp_.max_timed_literal;
    index_static_tables();
    chronicles_.push_back(&bp_.problem);
    for (const auto& c : bp_.instances) chronicles_.push_back(&c);
    for (const auto* c : chronicles_) declare(*c);
    for (const auto* c : chronicles_) internal(*c);
    horizon_constraints();
    gather_statements();
    consistency();
    support();
    if (options_.symmetry_breaking) symmetry();
    for (const auto& c : bp_.instances) {
      DecodeHint h{c.action, presence(c), time_var(c.start), time_var(c.end), {}};
      for (int p : c.params) h.params.push_back(art_.var_table.at(p));
      art_.hints.push_back(std::move(h));
    }
    return std::move(art_);
  }

 private:
  struct Stmt {
    const Chronicle* owner;
    const Statement* s;
    bool init;  // initial-state effect at the origin
  };

  void index_static_tables() {
    for (const auto& key : bp_.init_atoms) {
      std::istringstream in(key);
      std::string name;
      in >> name;
      std::vector<int> tuple;
      for (std::string a; in >> a;) tuple.push_back(bp_.objects.id(a));
      tables_[name].push_back(std::move(tuple));
    }
  }

  void declare(const Chronicle& c) {
    for (const auto& v : c.variables) {
      Term t;
      switch (v.kind) {
        case VarKind::Boolean: t = art_.formula.declare("b" + std::to_string(v.id), Sort::Bool); break;
        case VarKind::Symbol: t = art_.formula.declare("s" + std::to_string(v.id), Sort::Int); break;
        case VarKind::Timepoint:
          t = art_.formula.declare("t" + std::to_string(v.id), Sort::Real);
          art_.formula.add(Term::real(Rational(0)) <= t && t <= Term::real(art_.horizon));
          break;
        case VarKind::Duration:
          t = art_.formula.declare("d" + std::to_string(v.id), Sort::Real);
          art_.formula.add(Term::real(Rational(0)) <= t && t <= Term::real(art_.horizon));
          break;
      }
      art_.var_table.emplace(v.id, t);
      if (v.kind == VarKind::Symbol) domains_[v.id] = bp_.objects.of_type(v.type);
    }
  }

  Term presence(const Chronicle& c) const {
    return c.presence == Chronicle::kAlwaysPresent ? Term::boolean(true) : art_.var_table.at(c.presence);
  }

  Term time_var(int id) const { return id < 0 ? Term::real(Rational(0)) : art_.var_table.at(id); }

  Term time(const TimeRef& t) const {
    if (t.var < 0) return Term::real(t.offset);
    if (t.offset.is_zero()) return art_.var_table.at(t.var);
    return art_.var_table.at(t.var) + Term::real(t.offset);
  }

  Term sym(const SymRef& r) const {
    if (r.is_var()) return art_.var_table.at(r.var);
    return Term::integer(Rational(bp_.objects.id(r.constant)));
  }

  std::vector<int> domain(const SymRef& r) const {
    if (r.is_var()) return domains_.at(r.var);
    return {bp_.objects.id(r.constant)};
  }

  Term in_domain(const Term& x, const std::vector<int>& ids) const {
    if (ids.empty()) return Term::boolean(false);
    bool contiguous = ids.back() - ids.front() + 1 == static_cast<int>(ids.size());
    if (contiguous) {
      if (ids.size() == 1) return smt::eq(x, Term::integer(Rational(ids.front())));
      return Term::integer(Rational(ids.front())) <= x && x <= Term::integer(Rational(ids.back()));
    }
    std::vector<Term> parts;
    for (int id : ids) parts.push_back(smt::eq(x, Term::integer(Rational(id))));
    return smt::disj(std::move(parts));
  }

  void guard(const Chronicle& c, Term t, const std::string& label = {}) {
    if (t.is_true()) return;
    art_.formula.add(smt::implies(presence(c), t), label);
  }

  std::vector<Binding> bindings(const Chronicle& c, const std::set<std::string>& params) const {
    std::vector<Binding> out{Binding{}};
    for (const auto& name : params) {
      auto it = std::find(c.param_names.begin(), c.param_names.end(), name);
      if (it == c.param_names.end()) throw std::logic_error("unbound parameter ?" + name + " in " + c.label());
      int var = c.params[static_cast<std::size_t>(it - c.param_names.begin())];
      std::vector<Binding> next;
      for (const auto& b : out) {
        for (int id : domains_.at(var)) {
          Binding nb = b;
          nb.names[name] = bp_.objects.name(id);
          nb.vars.emplace_back(var, id);
          next.push_back(std::move(nb));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  Term matches(const Binding& b) const {
    std::vector<Term> parts;
    for (const auto& [var, id] : b.vars) parts.push_back(smt::eq(art_.var_table.at(var), Term::integer(Rational(id))));
    return smt::conj(std::move(parts));
  }

  void internal(const Chronicle& c) {
    for (int p : c.params) guard(c, in_domain(art_.var_table.at(p), domains_.at(p)));
    for (const auto& k : c.constraints) {
      switch (k.kind) {
        case Constraint::Kind::Linear: {
          std::vector<Term> parts;
          for (const auto& t : k.terms) parts.push_back(t.coef * art_.var_table.at(t.var));
          parts.push_back(Term::real(k.constant));
          guard(c, compare(k.op, smt::sum(parts), Term::real(Rational(0))));
          break;
        }
        case Constraint::Kind::SymEqual: guard(c, smt::eq(sym(k.a), sym(k.b))); break;
        case Constraint::Kind::SymNotEqual: guard(c, !smt::eq(sym(k.a), sym(k.b))); break;
        case Constraint::Kind::StaticCompare: {
          std::set<std::string> params;
          collect_params(k.left, params);
          collect_params(k.right, params);
          std::vector<Term> forbidden;
          for (const auto& b : bindings(c, params)) {
            auto l = plan::evaluate_numeric(k.left, b.names, bp_.static_values);
            auto r = plan::evaluate_numeric(k.right, b.names, bp_.static_values);
            if (!l || !r || !holds(k.op, *l, *r)) forbidden.push_back(!matches(b));
          }
          guard(c, smt::conj(std::move(forbidden)));
          break;
        }
        case Constraint::Kind::Duration: {
          std::set<std::string> params;
          collect_params(k.right, params);
          Term d = art_.var_table.at(k.target);
          std::vector<Term> parts;
          for (const auto& b : bindings(c, params)) {
            auto v = plan::evaluate_numeric(k.right, b.names, bp_.static_values);
            if (!v) {
              parts.push_back(!matches(b));
            } else {
              parts.push_back(smt::implies(matches(b), compare(k.op, d, Term::real(*v))));
            }
          }
          guard(c, smt::conj(std::move(parts)));
          break;
        }
      }
    }
    // Conditions on static functions are decided against the initial state.
    for (const auto& s : c.conditions) {
      if (!is_static(s)) continue;
      std::vector<Term> rows;
      for (const auto& tuple : tables_[bp_.functions[static_cast<std::size_t>(s.function)].name]) {
        std::vector<Term> eqs;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
          eqs.push_back(smt::eq(sym(s.args[i]), Term::integer(Rational(tuple[i]))));
        }
        rows.push_back(smt::conj(std::move(eqs)));
      }
      Term in_init = smt::disj(std::move(rows));
      guard(c, s.value ? in_init : !in_init);
    }
  }

  void horizon_constraints() {
    Term h = art_.var_table.at(bp_.horizon_var);
    art_.formula.add(Term::real(bp_.max_timed_literal) <= h);
    for (const auto& c : bp_.instances) guard(c, time_var(c.end) <= h);
  }

  bool is_static(const Statement& s) const { return bp_.functions[static_cast<std::size_t>(s.function)].is_static; }

  void gather_statements() {
    for (const auto* c : chronicles_) {
      for (const auto& e : c->effects) {
        if (is_static(e)) continue;
        bool init = c->is_problem() && e.start == e.end;
        effects_[e.function].push_back({c, &e, init});
      }
    }
  }

  bool unifiable(const Statement& a, const Statement& b) const {
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const auto& x = a.args[i];
      const auto& y = b.args[i];
      if (x.is_var() && y.is_var() && x.var == y.var) continue;
      auto dx = domain(x);
      auto dy = domain(y);
      std::vector<int> both;
      std::set_intersection(dx.begin(), dx.end(), dy.begin(), dy.end(), std::back_inserter(both));
      if (both.empty()) return false;
    }
    return true;
  }

  Term args_equal(const Statement& a, const Statement& b) const {
    std::vector<Term> parts;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const auto& x = a.args[i];
      const auto& y = b.args[i];
      if (x.is_var() && y.is_var() && x.var == y.var) continue;
      if (!x.is_var() && !y.is_var()) {
        if (x.constant != y.constant) return Term::boolean(false);
        continue;
      }
      parts.push_back(smt::eq(sym(x), sym(y)));
    }
    return smt::conj(std::move(parts));
  }

  void consistency() {
    for (const auto& [f, list] : effects_) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          const auto& a = list[i];
          const auto& b = list[j];
          // Origin effects end at 0 and every other effect starts at or after 0.
          if (a.init || b.init) continue;
          if (!unifiable(*a.s, *b.s)) continue;
          Term apart = time(a.s->end) <= time(b.s->start) || time(b.s->end) <= time(a.s->start);
          art_.formula.add(smt::implies(smt::conj({presence(*a.owner), presence(*b.owner), args_equal(*a.s, *b.s)}),
                                        apart));
        }
      }
    }
  }

  void support() {
    for (const auto* c : chronicles_) {
      for (const auto& cond : c->conditions) {
        if (is_static(cond)) continue;
        Term cs = time(cond.start);
        Term ce = time(cond.end);
        std::vector<const Stmt*> related;
        for (const auto& e : effects_[cond.function]) {
          if (unifiable(cond, *e.s)) related.push_back(&e);
        }
        std::vector<Term> required;
        // No change of the value strictly inside the condition's reach.
        for (const auto* e : related) {
          if (e->init) continue;
          Term active = smt::conj({presence(*e->owner), args_equal(cond, *e->s), cs < time(e->s->end),
                                   time(e->s->start) < ce});
          required.push_back(!active);
        }
        std::vector<Term> options;
        for (const auto* e : related) {
          if (e->s->value != cond.value) continue;
          std::vector<Term> parts{presence(*e->owner), args_equal(cond, *e->s), time(e->s->end) <= cs};
          for (const auto* o : related) {
            if (o == e || o->s->value == cond.value || o->init) continue;
            Term applies = smt::conj({presence(*o->owner), args_equal(cond, *o->s)});
            parts.push_back(smt::implies(applies, time(o->s->end) <= time(e->s->end) || ce <= time(o->s->start)));
          }
          options.push_back(smt::conj(std::move(parts)));
        }
        required.push_back(smt::disj(std::move(options)));
        guard(*c, smt::conj(std::move(required)));
      }
    }
  }

  void symmetry() {
    for (std::size_t i = 1; i < bp_.instances.size(); ++i) {
      const auto& prev = bp_.instances[i - 1];
      const auto& cur = bp_.instances[i];
      if (prev.action != cur.action) continue;
      art_.formula.add(smt::implies(presence(cur), presence(prev) && time_var(prev.start) <= time_var(cur.start)));
    }
  }

  const BoundedProblem& bp_;
  EncodeOptions options_;
  EncodingArtifact art_;
  std::vector<const Chronicle*> chronicles_;
  std::map<int, std::vector<int>> domains_;
  std::map<std::string, std::vector<std::vector<int>>> tables_;
  std::map<int, std::vector<Stmt>> effects_;
};

}  // namespace

Rational default_horizon(const BoundedProblem& bp) {
  Rational total = bp.max_timed_literal;
  for (const auto& c : bp.instances) {
    int d = duration_var(c);
    std::optional<Rational> longest;
    if (d < 0) longest = Rational(0);
    for (const auto& k : c.constraints) {
      if (d < 0) break;
      std::optional<Rational> bound;
      if (k.kind == Constraint::Kind::Linear && k.terms.size() == 1 && k.terms[0].var == d &&
          k.terms[0].coef == Rational(1) && k.op != CompareOp::Ge && k.op != CompareOp::Gt) {
        bound = -k.constant;
      } else if (k.kind == Constraint::Kind::Duration &&
                 (k.op == CompareOp::Eq || k.op == CompareOp::Le || k.op == CompareOp::Lt)) {
        std::set<std::string> params;
        collect_params(k.right, params);
        std::vector<std::map<std::string, std::string>> all{{}};
        for (const auto& name : params) {
          auto it = std::find(c.param_names.begin(), c.param_names.end(), name);
          int var = c.params.at(static_cast<std::size_t>(it - c.param_names.begin()));
          std::vector<std::map<std::string, std::string>> next;
          for (const auto& b : all) {
            for (int id : bp.objects.of_type(c.variable(var).type)) {
              auto nb = b;
              nb[name] = bp.objects.name(id);
              next.push_back(std::move(nb));
            }
          }
          all = std::move(next);
        }
        for (const auto& b : all) {
          auto v = plan::evaluate_numeric(k.right, b, bp.static_values);
          if (v) bound = bound ? max(*bound, *v) : *v;
        }
        if (!bound) bound = Rational(0);
      }
      if (bound) longest = longest ? min(*longest, *bound) : *bound;
    }
    if (!longest) {
      throw LiftedError(LiftedErrorKind::HorizonMissing,
                        "no upper bound on the duration of " + c.action + "; set a horizon explicitly");
    }
    total += max(*longest, Rational(0)) + bp.epsilon;
  }
  return total;
}

EncodingArtifact encode(const BoundedProblem& bp, const EncodeOptions& options) {
  return Encoder(bp, options).run();
}

plan::Plan decode(const smt::Model& model, const EncodingArtifact& artifact, const BoundedProblem& bp) {
  plan::Plan out;
  for (const auto& h : artifact.hints) {
    if (!smt::evaluate(h.presence, model).boolean) continue;
    plan::PlanStep step;
    step.action = h.action;
    step.start = smt::evaluate(h.start, model).number;
    step.duration = smt::evaluate(h.end, model).number - step.start;
    for (const auto& p : h.params) {
      Rational id = smt::evaluate(p, model).number;
      if (!id.is_integer() || id.num() < 0 || id.num() >= bp.objects.size()) {
        throw smt::SmtError(smt::SmtErrorKind::IncompleteModel, "symbol value out of range in " + h.action);
      }
      step.args.push_back(bp.objects.name(static_cast<int>(id.num())));
    }
    out.steps.push_back(std::move(step));
  }
  out.sort();
  return out;
}

}  // namespace chronosat::lifted
