#include "chronosat/smt/term.hpp"

#include <algorithm>
#include <sstream>

namespace chronosat::smt {

std::string_view to_string(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

namespace {

[[noreturn]] void ill(const std::string& msg) { throw SmtError(SmtErrorKind::IllFormed, msg); }

Term make(Op op, Sort sort, std::vector<Term> args, Rational value = {}, std::string name = {}) {
  return Term(std::make_shared<const TermNode>(TermNode{op, sort, value, std::move(name), std::move(args)}));
}

void need_bool(const Term& t, const char* what) {
  if (t.sort() != Sort::Bool) ill(std::string(what) + " expects Bool operands");
}

void need_numeric(const Term& t, const char* what) {
  if (!t.is_numeric()) ill(std::string(what) + " expects numeric operands");
}

Sort join(const Term& a, const Term& b) {
  return (a.sort() == Sort::Real || b.sort() == Sort::Real) ? Sort::Real : Sort::Int;
}

const Term& true_term() {
  static const Term t = make(Op::True, Sort::Bool, {});
  return t;
}

const Term& false_term() {
  static const Term t = make(Op::False, Sort::Bool, {});
  return t;
}

bool valid_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string::npos;
  });
}

}  // namespace

Term::Term() : node_(true_term().node_) {}

Term Term::boolean(bool b) { return b ? true_term() : false_term(); }

Term Term::integer(Rational v) {
  if (!v.is_integer()) ill("integer constant " + v.str() + " is not integral");
  return make(Op::Number, Sort::Int, {}, v);
}

Term Term::real(Rational v) { return make(Op::Number, Sort::Real, {}, v); }

Term Term::var(std::string name, Sort sort) {
  if (!valid_symbol(name)) ill("invalid SMT-LIB symbol '" + name + "'");
  return make(Op::Var, sort, {}, {}, std::move(name));
}

Term operator+(const Term& a, const Term& b) {
  need_numeric(a, "+");
  need_numeric(b, "+");
  return make(Op::Add, join(a, b), {a, b});
}

Term operator-(const Term& a, const Term& b) {
  need_numeric(a, "-");
  need_numeric(b, "-");
  return make(Op::Sub, join(a, b), {a, b});
}

Term operator*(const Rational& k, const Term& t) {
  need_numeric(t, "*");
  Sort s = (t.sort() == Sort::Int && k.is_integer()) ? Sort::Int : Sort::Real;
  if (t.op() == Op::Number) return s == Sort::Int ? Term::integer(k * t.value()) : Term::real(k * t.value());
  return make(Op::Scale, s, {t}, k);
}

Term operator<=(const Term& a, const Term& b) {
  need_numeric(a, "<=");
  need_numeric(b, "<=");
  if (a.op() == Op::Number && b.op() == Op::Number) return Term::boolean(a.value() <= b.value());
  return make(Op::Le, Sort::Bool, {a, b});
}

Term operator<(const Term& a, const Term& b) {
  need_numeric(a, "<");
  need_numeric(b, "<");
  if (a.op() == Op::Number && b.op() == Op::Number) return Term::boolean(a.value() < b.value());
  return make(Op::Lt, Sort::Bool, {a, b});
}

Term operator>=(const Term& a, const Term& b) { return b <= a; }
Term operator>(const Term& a, const Term& b) { return b < a; }

Term operator!(const Term& a) {
  need_bool(a, "not");
  if (a.is_true()) return false_term();
  if (a.is_false()) return true_term();
  if (a.op() == Op::Not) return a.args()[0];
  return make(Op::Not, Sort::Bool, {a});
}

Term operator&&(const Term& a, const Term& b) { return conj({a, b}); }
Term operator||(const Term& a, const Term& b) { return disj({a, b}); }

Term conj(std::vector<Term> parts) {
  std::vector<Term> kept;
  kept.reserve(parts.size());
  for (auto& p : parts) {
    need_bool(p, "and");
    if (p.is_false()) return false_term();
    if (p.is_true()) continue;
    if (p.op() == Op::And) {
      kept.insert(kept.end(), p.args().begin(), p.args().end());
    } else {
      kept.push_back(std::move(p));
    }
  }
  if (kept.empty()) return true_term();
  if (kept.size() == 1) return kept[0];
  return make(Op::And, Sort::Bool, std::move(kept));
}

Term disj(std::vector<Term> parts) {
  std::vector<Term> kept;
  kept.reserve(parts.size());
  for (auto& p : parts) {
    need_bool(p, "or");
    if (p.is_true()) return true_term();
    if (p.is_false()) continue;
    if (p.op() == Op::Or) {
      kept.insert(kept.end(), p.args().begin(), p.args().end());
    } else {
      kept.push_back(std::move(p));
    }
  }
  if (kept.empty()) return false_term();
  if (kept.size() == 1) return kept[0];
  return make(Op::Or, Sort::Bool, std::move(kept));
}

Term implies(const Term& a, const Term& b) {
  need_bool(a, "=>");
  need_bool(b, "=>");
  if (a.is_false() || b.is_true()) return true_term();
  if (a.is_true()) return b;
  if (b.is_false()) return !a;
  return make(Op::Implies, Sort::Bool, {a, b});
}

Term ite(const Term& c, const Term& a, const Term& b) {
  need_bool(c, "ite");
  if ((a.sort() == Sort::Bool) != (b.sort() == Sort::Bool)) ill("ite branches have different sorts");
  if (c.is_true()) return a;
  if (c.is_false()) return b;
  Sort s = a.sort() == Sort::Bool ? Sort::Bool : join(a, b);
  return make(Op::Ite, s, {c, a, b});
}

Term eq(const Term& a, const Term& b) {
  if ((a.sort() == Sort::Bool) != (b.sort() == Sort::Bool)) ill("= between Bool and numeric operands");
  if (a.op() == Op::Number && b.op() == Op::Number) return Term::boolean(a.value() == b.value());
  if (a.same(b)) return true_term();
  return make(Op::Eq, Sort::Bool, {a, b});
}

Term sum(const std::vector<Term>& parts, Sort empty_sort) {
  if (parts.empty()) return empty_sort == Sort::Int ? Term::integer(0) : Term::real(0);
  Term acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = acc + parts[i];
  return acc;
}

Term max(const Term& a, const Term& b) { return ite(a >= b, a, b); }

const Value& Model::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw SmtError(SmtErrorKind::IncompleteModel, "model has no value for '" + name + "'");
  return it->second;
}

Value evaluate(const Term& t, const Model& m) {
  auto num = [&](const Term& x) { return evaluate(x, m).number; };
  auto bol = [&](const Term& x) { return evaluate(x, m).boolean; };
  switch (t.op()) {
    case Op::True: return Value{Sort::Bool, true, {}};
    case Op::False: return Value{Sort::Bool, false, {}};
    case Op::Number: return Value{t.sort(), false, t.value()};
    case Op::Var: {
      Value v = m.at(t.name());
      v.sort = t.sort();
      return v;
    }
    case Op::And:
      return Value{Sort::Bool, std::all_of(t.args().begin(), t.args().end(), bol), {}};
    case Op::Or:
      return Value{Sort::Bool, std::any_of(t.args().begin(), t.args().end(), bol), {}};
    case Op::Not: return Value{Sort::Bool, !bol(t.args()[0]), {}};
    case Op::Implies: return Value{Sort::Bool, !bol(t.args()[0]) || bol(t.args()[1]), {}};
    case Op::Ite: {
      Value v = bol(t.args()[0]) ? evaluate(t.args()[1], m) : evaluate(t.args()[2], m);
      v.sort = t.sort();
      return v;
    }
    case Op::Eq: {
      Value a = evaluate(t.args()[0], m);
      Value b = evaluate(t.args()[1], m);
      bool r = a.sort == Sort::Bool ? a.boolean == b.boolean : a.number == b.number;
      return Value{Sort::Bool, r, {}};
    }
    case Op::Le: return Value{Sort::Bool, num(t.args()[0]) <= num(t.args()[1]), {}};
    case Op::Lt: return Value{Sort::Bool, num(t.args()[0]) < num(t.args()[1]), {}};
    case Op::Add: return Value{t.sort(), false, num(t.args()[0]) + num(t.args()[1])};
    case Op::Sub: return Value{t.sort(), false, num(t.args()[0]) - num(t.args()[1])};
    case Op::Scale: return Value{t.sort(), false, t.value() * num(t.args()[0])};
  }
  return {};
}

Term Formula::declare(const std::string& name, Sort sort) {
  Term v = Term::var(name, sort);
  if (!index_.emplace(name, sort).second) ill("duplicate declaration of '" + name + "'");
  decls_.emplace_back(name, sort);
  return v;
}

void Formula::add(Term t, std::string label) {
  need_bool(t, "assert");
  if (!label.empty() && !valid_symbol(label)) ill("invalid assertion label '" + label + "'");
  asserts_.push_back(Assertion{std::move(t), std::move(label)});
}

std::optional<Sort> Formula::sort_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string number_literal(const Rational& v, Sort sort) {
  auto mag = [&](std::int64_t x) {
    std::string s = std::to_string(x < 0 ? -x : x);
    return sort == Sort::Real ? s + ".0" : s;
  };
  std::string body;
  if (v.is_integer()) {
    body = mag(v.num());
  } else {
    if (sort == Sort::Int) ill("non-integral Int literal " + v.str());
    body = "(/ " + mag(v.num()) + " " + mag(v.den()) + ")";
  }
  return v.sign() < 0 ? "(- " + body + ")" : body;
}

namespace {

struct Emitter {
  const Formula* formula = nullptr;
  bool uses_int = false;
  bool uses_real = false;
  std::string out;

  void note(Sort s) {
    if (s == Sort::Int) uses_int = true;
    if (s == Sort::Real) uses_real = true;
  }

  void open(const char* op) {
    out += '(';
    out += op;
  }

  void emit(const Term& t, bool want_real) {
    bool coerce = want_real && t.sort() == Sort::Int;
    switch (t.op()) {
      case Op::True: out += "true"; return;
      case Op::False: out += "false"; return;
      case Op::Number: {
        Sort s = coerce ? Sort::Real : t.sort();
        note(s);
        out += number_literal(t.value(), s);
        return;
      }
      case Op::Var: {
        if (formula) {
          auto s = formula->sort_of(t.name());
          if (!s) ill("undeclared variable '" + t.name() + "'");
          if (*s != t.sort()) ill("variable '" + t.name() + "' used with the wrong sort");
        }
        note(t.sort());
        if (coerce) {
          note(Sort::Real);
          out += "(to_real " + t.name() + ")";
        } else {
          out += t.name();
        }
        return;
      }
      default: break;
    }
    if (coerce) {
      note(Sort::Real);
      out += "(to_real ";
      emit(t, false);
      out += ')';
      return;
    }
    const auto& a = t.args();
    switch (t.op()) {
      case Op::And:
      case Op::Or:
        open(t.op() == Op::And ? "and" : "or");
        for (const auto& x : a) {
          out += ' ';
          emit(x, false);
        }
        break;
      case Op::Not:
        open("not ");
        emit(a[0], false);
        break;
      case Op::Implies:
        open("=> ");
        emit(a[0], false);
        out += ' ';
        emit(a[1], false);
        break;
      case Op::Ite: {
        bool real = t.sort() == Sort::Real;
        open("ite ");
        emit(a[0], false);
        out += ' ';
        emit(a[1], real);
        out += ' ';
        emit(a[2], real);
        break;
      }
      case Op::Eq:
      case Op::Le:
      case Op::Lt: {
        bool real = a[0].is_numeric() && join(a[0], a[1]) == Sort::Real;
        open(t.op() == Op::Eq ? "= " : (t.op() == Op::Le ? "<= " : "< "));
        emit(a[0], real);
        out += ' ';
        emit(a[1], real);
        break;
      }
      case Op::Add:
      case Op::Sub: {
        bool real = t.sort() == Sort::Real;
        open(t.op() == Op::Add ? "+ " : "- ");
        emit(a[0], real);
        out += ' ';
        emit(a[1], real);
        break;
      }
      case Op::Scale: {
        bool real = t.sort() == Sort::Real;
        Sort s = real ? Sort::Real : Sort::Int;
        note(s);
        open("* ");
        out += number_literal(t.value(), s);
        out += ' ';
        emit(a[0], real);
        break;
      }
      default: break;
    }
    out += ')';
  }
};

std::string pick_logic(bool i, bool r) {
  if (i && r) return "QF_LIRA";
  if (r) return "QF_LRA";
  return "QF_LIA";
}

}  // namespace

std::string to_smtlib(const Term& t) {
  Emitter e;
  e.emit(t, false);
  return e.out;
}

std::string logic_for(const Formula& f) {
  Emitter e;
  e.formula = &f;
  for (const auto& [name, sort] : f.declarations()) e.note(sort);
  for (const auto& a : f.assertions()) e.emit(a.term, false);
  return pick_logic(e.uses_int, e.uses_real);
}

std::string emit_smtlib(const Formula& f) {
  Emitter e;
  e.formula = &f;
  for (const auto& [name, sort] : f.declarations()) e.note(sort);
  std::string body;
  for (const auto& [name, sort] : f.declarations()) {
    body += "(declare-const " + name + " " + std::string(to_string(sort)) + ")\n";
  }
  for (const auto& a : f.assertions()) {
    e.out.clear();
    e.emit(a.term, false);
    if (a.label.empty()) {
      body += "(assert " + e.out + ")\n";
    } else {
      body += "(assert (! " + e.out + " :named " + a.label + "))\n";
    }
  }
  return "(set-logic " + pick_logic(e.uses_int, e.uses_real) + ")\n" + body;
}

}  // namespace chronosat::smt
