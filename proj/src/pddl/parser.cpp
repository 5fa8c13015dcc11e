#include "chronosat/pddl/parser.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chronosat/pddl/types.hpp"

namespace chronosat::pddl {

namespace {

constexpr std::array<std::string_view, 10> kSupported = {
    "strips",         "typing",           "durative-actions",      "negative-preconditions",
    "equality",       "numeric-fluents",  "fluents",               "timed-initial-literals",
    "action-costs",   "duration-inequalities"};

// S-expression node over the token stream. `tok` is the atom for leaves and
// the opening parenthesis for lists.
struct Node {
  Token tok;
  bool list = false;
  std::vector<Node> items;

  bool is(TokenKind k) const { return !list && tok.kind == k; }
  bool is_symbol(std::string_view s) const { return is(TokenKind::Symbol) && tok.text == s; }
  bool is_keyword(std::string_view s) const { return is(TokenKind::Keyword) && tok.text == s; }
  bool head_is(std::string_view s) const {
    return list && !items.empty() && (items[0].is_symbol(s) || items[0].is_keyword(s));
  }
};

[[noreturn]] void fail(ErrorKind kind, const Position& pos, const std::string& msg) {
  throw PddlError(kind, pos, msg);
}

Node read_node(std::span<const Token> tokens, std::size_t& i) {
  if (i >= tokens.size()) {
    Position p = tokens.empty() ? Position{} : tokens.back().pos;
    fail(ErrorKind::SyntaxError, p, "unexpected end of input, expected an expression");
  }
  const Token& t = tokens[i];
  if (t.kind == TokenKind::Close) fail(ErrorKind::SyntaxError, t.pos, "unexpected ')'");
  if (t.kind != TokenKind::Open) {
    ++i;
    return Node{t, false, {}};
  }
  Node n{t, true, {}};
  ++i;
  while (i < tokens.size() && tokens[i].kind != TokenKind::Close) n.items.push_back(read_node(tokens, i));
  if (i >= tokens.size()) fail(ErrorKind::SyntaxError, t.pos, "unbalanced '(' is never closed");
  ++i;
  return n;
}

Node read_document(std::span<const Token> tokens) {
  std::size_t i = 0;
  Node root = read_node(tokens, i);
  if (i != tokens.size()) fail(ErrorKind::SyntaxError, tokens[i].pos, "trailing input after definition");
  return root;
}

const Node& expect_list(const Node& n, const std::string& what) {
  if (!n.list) fail(ErrorKind::SyntaxError, n.tok.pos, "expected " + what);
  return n;
}

const std::string& expect_name(const Node& n, const std::string& what) {
  if (!n.is(TokenKind::Symbol)) fail(ErrorKind::SyntaxError, n.tok.pos, "expected " + what);
  return n.tok.text;
}

// Typed list: `a b - t c - u d` (trailing names default to `object`).
std::vector<std::pair<TypedName, Position>> typed_list(const Node& list, std::size_t from,
                                                       TokenKind name_kind) {
  std::vector<std::pair<TypedName, Position>> out;
  std::vector<std::pair<std::string, Position>> pending;
  for (std::size_t k = from; k < list.items.size(); ++k) {
    const Node& it = list.items[k];
    if (it.is_symbol("-")) {
      if (k + 1 >= list.items.size()) fail(ErrorKind::SyntaxError, it.tok.pos, "expected a type after '-'");
      const Node& ty = list.items[k + 1];
      if (ty.head_is("either")) {
        fail(ErrorKind::UnsupportedRequirement, ty.tok.pos, "either-types are not supported");
      }
      const std::string& type = expect_name(ty, "a type name");
      if (pending.empty()) fail(ErrorKind::SyntaxError, it.tok.pos, "'-' without names to type");
      for (auto& [name, pos] : pending) out.push_back({TypedName{name, type}, pos});
      pending.clear();
      ++k;
      continue;
    }
    if (!it.is(name_kind)) {
      fail(ErrorKind::SyntaxError, it.tok.pos,
           name_kind == TokenKind::Variable ? "expected a ?variable" : "expected a name");
    }
    pending.push_back({it.tok.text, it.tok.pos});
  }
  for (auto& [name, pos] : pending) out.push_back({TypedName{name, "object"}, pos});
  return out;
}

CompareOp compare_op(const std::string& s) {
  if (s == "<") return CompareOp::Lt;
  if (s == "<=") return CompareOp::Le;
  if (s == "=") return CompareOp::Eq;
  if (s == ">=") return CompareOp::Ge;
  return CompareOp::Gt;
}

bool is_compare(const Node& n) {
  if (!n.is(TokenKind::Symbol)) return false;
  const auto& t = n.tok.text;
  return t == "<" || t == "<=" || t == "=" || t == ">=" || t == ">";
}

// Shared context for checking symbols while parsing one domain or problem.
struct Scope {
  const DomainModel* domain = nullptr;
  const TypeHierarchy* types = nullptr;
  std::map<std::string, std::string> variables;  // ?name -> type
  std::set<std::string> objects;                 // constants and objects visible
  bool allow_duration = false;
  bool ground = false;  // problem context: no variables allowed
};

Term read_term(const Node& n, const Scope& scope) {
  if (n.is(TokenKind::Variable)) {
    if (scope.ground || !scope.variables.count(n.tok.text)) {
      fail(ErrorKind::UndeclaredSymbol, n.tok.pos, "undeclared variable ?" + n.tok.text);
    }
    return Term{true, n.tok.text};
  }
  if (n.is(TokenKind::Symbol)) {
    if (!scope.objects.count(n.tok.text)) {
      fail(ErrorKind::UndeclaredSymbol, n.tok.pos, "undeclared object or constant '" + n.tok.text + "'");
    }
    return Term{false, n.tok.text};
  }
  fail(ErrorKind::SyntaxError, n.tok.pos, "expected a term");
}

Atom read_atom(const Node& n, const Scope& scope, bool function) {
  expect_list(n, function ? "a function term" : "an atom");
  if (n.items.empty()) fail(ErrorKind::SyntaxError, n.tok.pos, "empty atom");
  const Node& head = n.items[0];
  const std::string& name = expect_name(head, function ? "a function name" : "a predicate name");
  const PredicateDecl* decl = function ? scope.domain->find_function(name) : scope.domain->find_predicate(name);
  if (!decl) {
    fail(ErrorKind::UndeclaredSymbol, head.tok.pos,
         std::string(function ? "undeclared function '" : "undeclared predicate '") + name + "'");
  }
  if (decl->params.size() + 1 != n.items.size()) {
    fail(ErrorKind::ArityMismatch, head.tok.pos,
         "'" + name + "' expects " + std::to_string(decl->params.size()) + " arguments, got " +
             std::to_string(n.items.size() - 1));
  }
  Atom a{name, {}};
  for (std::size_t k = 1; k < n.items.size(); ++k) a.args.push_back(read_term(n.items[k], scope));
  return a;
}

NumericExpr read_numeric(const Node& n, const Scope& scope) {
  if (n.is(TokenKind::Number)) return NumericExpr::number(Rational::parse(n.tok.text));
  if (n.is(TokenKind::Variable)) {
    if (n.tok.text == "duration" && scope.allow_duration) {
      NumericExpr e;
      e.kind = NumericExpr::Kind::Duration;
      return e;
    }
    fail(ErrorKind::UndeclaredSymbol, n.tok.pos, "variable ?" + n.tok.text + " is not numeric here");
  }
  if (!n.list || n.items.empty()) fail(ErrorKind::SyntaxError, n.tok.pos, "expected a numeric expression");
  const Node& head = n.items[0];
  if (head.is(TokenKind::Symbol)) {
    const std::string& op = head.tok.text;
    NumericExpr::Kind kind{};
    bool arith = true;
    if (op == "+") kind = NumericExpr::Kind::Add;
    else if (op == "-") kind = NumericExpr::Kind::Sub;
    else if (op == "*") kind = NumericExpr::Kind::Mul;
    else if (op == "/") kind = NumericExpr::Kind::Div;
    else arith = false;
    if (arith) {
      NumericExpr e;
      e.kind = kind;
      for (std::size_t k = 1; k < n.items.size(); ++k) e.operands.push_back(read_numeric(n.items[k], scope));
      bool ok = kind == NumericExpr::Kind::Sub ? !e.operands.empty() : e.operands.size() >= 2;
      if ((kind == NumericExpr::Kind::Div) && e.operands.size() != 2) ok = false;
      if (!ok) fail(ErrorKind::SyntaxError, head.tok.pos, "wrong operand count for '" + op + "'");
      return e;
    }
  }
  NumericExpr e;
  e.kind = NumericExpr::Kind::Function;
  e.function = read_atom(n, scope, /*function=*/true);
  return e;
}

Formula read_formula(const Node& n, const Scope& scope) {
  expect_list(n, "a condition");
  if (n.items.empty()) return Formula::conjunction();
  const Node& head = n.items[0];
  if (head.is_symbol("and") || head.is_symbol("or")) {
    Formula f;
    f.kind = head.is_symbol("and") ? Formula::Kind::And : Formula::Kind::Or;
    for (std::size_t k = 1; k < n.items.size(); ++k) f.children.push_back(read_formula(n.items[k], scope));
    return f;
  }
  if (head.is_symbol("not")) {
    if (n.items.size() != 2) fail(ErrorKind::SyntaxError, head.tok.pos, "'not' takes exactly one argument");
    return Formula::negation(read_formula(n.items[1], scope));
  }
  if (head.is_symbol("imply") || head.is_symbol("forall") || head.is_symbol("exists") ||
      head.is_symbol("when")) {
    fail(ErrorKind::UnsupportedRequirement, head.tok.pos, "'" + head.tok.text + "' conditions are not supported");
  }
  if (is_compare(head)) {
    if (n.items.size() != 3) fail(ErrorKind::SyntaxError, head.tok.pos, "comparison takes two arguments");
    const Node& l = n.items[1];
    const Node& r = n.items[2];
    bool term_like = head.tok.text == "=" && !l.list && !r.list && !l.is(TokenKind::Number) &&
                     !r.is(TokenKind::Number) && !(l.is(TokenKind::Variable) && l.tok.text == "duration");
    if (term_like) {
      Formula f;
      f.kind = Formula::Kind::Equals;
      f.lhs = read_term(l, scope);
      f.rhs = read_term(r, scope);
      return f;
    }
    Formula f;
    f.kind = Formula::Kind::Compare;
    f.op = compare_op(head.tok.text);
    f.left = read_numeric(l, scope);
    f.right = read_numeric(r, scope);
    return f;
  }
  return Formula::of_atom(read_atom(n, scope, false));
}

void read_effects(const Node& n, const Scope& scope, std::vector<Effect>& out) {
  expect_list(n, "an effect");
  if (n.items.empty()) return;
  const Node& head = n.items[0];
  if (head.is_symbol("and")) {
    for (std::size_t k = 1; k < n.items.size(); ++k) read_effects(n.items[k], scope, out);
    return;
  }
  if (head.is_symbol("increase") || head.is_symbol("decrease") || head.is_symbol("assign") ||
      head.is_symbol("scale-up") || head.is_symbol("scale-down")) {
    fail(ErrorKind::UnsupportedRequirement, head.tok.pos,
         "numeric effect '" + head.tok.text + "': only static numeric functions are supported");
  }
  if (head.is_symbol("forall") || head.is_symbol("when")) {
    fail(ErrorKind::UnsupportedRequirement, head.tok.pos, "conditional/universal effects are not supported");
  }
  if (head.is_symbol("not")) {
    if (n.items.size() != 2) fail(ErrorKind::SyntaxError, head.tok.pos, "'not' takes exactly one argument");
    out.push_back(Effect{false, read_atom(n.items[1], scope, false)});
    return;
  }
  out.push_back(Effect{true, read_atom(n, scope, false)});
}

std::optional<TimeSpec> time_spec(const Node& n, std::size_t& consumed) {
  // `(at start X)`, `(at end X)`, `(over all X)`
  if (!n.list || n.items.size() != 3) return std::nullopt;
  const Node& a = n.items[0];
  const Node& b = n.items[1];
  consumed = 2;
  if (a.is_symbol("at") && b.is_symbol("start")) return TimeSpec::AtStart;
  if (a.is_symbol("at") && b.is_symbol("end")) return TimeSpec::AtEnd;
  if (a.is_symbol("over") && b.is_symbol("all")) return TimeSpec::OverAll;
  return std::nullopt;
}

void read_timed_conditions(const Node& n, const Scope& scope, std::vector<TimedCondition>& out) {
  expect_list(n, "a durative condition");
  if (n.items.empty()) return;
  if (n.items[0].is_symbol("and")) {
    for (std::size_t k = 1; k < n.items.size(); ++k) read_timed_conditions(n.items[k], scope, out);
    return;
  }
  std::size_t consumed = 0;
  auto when = time_spec(n, consumed);
  if (!when) fail(ErrorKind::SyntaxError, n.tok.pos, "expected (at start ..), (over all ..) or (at end ..)");
  out.push_back(TimedCondition{*when, read_formula(n.items[2], scope)});
}

void read_timed_effects(const Node& n, const Scope& scope, std::vector<TimedEffect>& out) {
  expect_list(n, "a durative effect");
  if (n.items.empty()) return;
  if (n.items[0].is_symbol("and")) {
    for (std::size_t k = 1; k < n.items.size(); ++k) read_timed_effects(n.items[k], scope, out);
    return;
  }
  std::size_t consumed = 0;
  auto when = time_spec(n, consumed);
  if (!when || *when == TimeSpec::OverAll) {
    if (n.items[0].is_symbol("increase") || n.items[0].is_symbol("decrease")) {
      fail(ErrorKind::UnsupportedRequirement, n.items[0].tok.pos, "continuous numeric effects are not supported");
    }
    fail(ErrorKind::SyntaxError, n.tok.pos, "expected (at start ..) or (at end ..) effect");
  }
  std::vector<Effect> effs;
  read_effects(n.items[2], scope, effs);
  for (auto& e : effs) out.push_back(TimedEffect{*when, std::move(e)});
}

void read_duration(const Node& n, const Scope& scope, std::vector<DurationBound>& out) {
  expect_list(n, "a duration constraint");
  if (n.items.empty()) return;
  if (n.items[0].is_symbol("and")) {
    for (std::size_t k = 1; k < n.items.size(); ++k) read_duration(n.items[k], scope, out);
    return;
  }
  const Node& head = n.items[0];
  if (!(head.is_symbol("=") || head.is_symbol("<=") || head.is_symbol(">=")) || n.items.size() != 3 ||
      !n.items[1].is(TokenKind::Variable) || n.items[1].tok.text != "duration") {
    fail(ErrorKind::SyntaxError, n.tok.pos, "expected (= ?duration e), (<= ?duration e) or (>= ?duration e)");
  }
  Scope inner = scope;
  inner.allow_duration = false;
  out.push_back(DurationBound{compare_op(head.tok.text), read_numeric(n.items[2], inner)});
}

std::vector<TypedName> read_params(const Node& n, const TypeHierarchy& types, Scope& scope) {
  expect_list(n, "a parameter list");
  std::vector<TypedName> params;
  for (auto& [tn, pos] : typed_list(n, 0, TokenKind::Variable)) {
    if (scope.variables.count(tn.name)) fail(ErrorKind::DuplicateSymbol, pos, "duplicate parameter ?" + tn.name);
    if (!types.contains(tn.type)) fail(ErrorKind::UndeclaredSymbol, pos, "undeclared type '" + tn.type + "'");
    scope.variables[tn.name] = tn.type;
    params.push_back(tn);
  }
  return params;
}

// Keyword/value pairs after an action name.
std::map<std::string, const Node*> keyword_args(const Node& n, std::size_t from) {
  std::map<std::string, const Node*> out;
  for (std::size_t k = from; k < n.items.size(); k += 2) {
    const Node& key = n.items[k];
    if (!key.is(TokenKind::Keyword)) fail(ErrorKind::SyntaxError, key.tok.pos, "expected a :keyword");
    if (k + 1 >= n.items.size()) fail(ErrorKind::SyntaxError, key.tok.pos, "missing value for :" + key.tok.text);
    if (out.count(key.tok.text)) fail(ErrorKind::DuplicateSymbol, key.tok.pos, "repeated :" + key.tok.text);
    out[key.tok.text] = &n.items[k + 1];
  }
  return out;
}

void check_requirements(const Node& sec, std::vector<std::string>& out) {
  for (std::size_t k = 1; k < sec.items.size(); ++k) {
    const Node& r = sec.items[k];
    if (!r.is(TokenKind::Keyword)) fail(ErrorKind::SyntaxError, r.tok.pos, "expected a requirement flag");
    if (std::find(kSupported.begin(), kSupported.end(), r.tok.text) == kSupported.end()) {
      fail(ErrorKind::UnsupportedRequirement, r.tok.pos, "requirement :" + r.tok.text + " is not supported");
    }
    out.push_back(r.tok.text);
  }
}

void check_header(const Node& root, const char* what, std::string& name) {
  if (!root.list || root.items.size() < 2 || !root.items[0].is_symbol("define")) {
    fail(ErrorKind::SyntaxError, root.tok.pos, "expected (define ...)");
  }
  const Node& h = root.items[1];
  if (!h.list || h.items.size() != 2 || !h.items[0].is_symbol(what)) {
    fail(ErrorKind::SyntaxError, h.tok.pos, std::string("expected (") + what + " <name>)");
  }
  name = expect_name(h.items[1], std::string("a ") + what + " name");
}

}  // namespace

std::span<const std::string_view> supported_requirements() { return kSupported; }

DomainModel parse_domain(std::span<const Token> tokens) {
  Node root = read_document(tokens);
  DomainModel d;
  check_header(root, "domain", d.name);

  std::vector<const Node*> action_nodes;
  std::set<std::string> declared_types{"object"};
  std::map<std::string, Position> implicit_types;

  for (std::size_t s = 2; s < root.items.size(); ++s) {
    const Node& sec = root.items[s];
    if (!sec.list || sec.items.empty() || !sec.items[0].is(TokenKind::Keyword)) {
      fail(ErrorKind::SyntaxError, sec.tok.pos, "expected a (:section ...)");
    }
    const std::string& key = sec.items[0].tok.text;
    if (key == "requirements") {
      check_requirements(sec, d.requirements);
    } else if (key == "types") {
      for (auto& [tn, pos] : typed_list(sec, 1, TokenKind::Symbol)) {
        if (tn.name == "object") continue;
        if (declared_types.count(tn.name)) fail(ErrorKind::DuplicateSymbol, pos, "type '" + tn.name + "' declared twice");
        declared_types.insert(tn.name);
        d.types.push_back(tn);
        implicit_types.emplace(tn.type, pos);
      }
    } else if (key == "constants") {
      for (auto& [tn, pos] : typed_list(sec, 1, TokenKind::Symbol)) d.constants.push_back(tn);
    } else if (key == "predicates" || key == "functions") {
      bool fn = key == "functions";
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Node& p = sec.items[k];
        if (fn && p.is_symbol("-")) {
          // `- number` return type annotations
          if (k + 1 >= sec.items.size() || !sec.items[k + 1].is_symbol("number")) {
            fail(ErrorKind::UnsupportedRequirement, p.tok.pos, "only numeric functions are supported");
          }
          ++k;
          continue;
        }
        expect_list(p, fn ? "a function declaration" : "a predicate declaration");
        if (p.items.empty()) fail(ErrorKind::SyntaxError, p.tok.pos, "empty declaration");
        PredicateDecl decl{expect_name(p.items[0], "a name"), {}};
        std::set<std::string> seen;
        for (auto& [tn, pos] : typed_list(p, 1, TokenKind::Variable)) {
          if (!seen.insert(tn.name).second) fail(ErrorKind::DuplicateSymbol, pos, "duplicate parameter ?" + tn.name);
          if (!declared_types.count(tn.type) && !implicit_types.count(tn.type)) {
            fail(ErrorKind::UndeclaredSymbol, pos, "undeclared type '" + tn.type + "'");
          }
          decl.params.push_back(tn);
        }
        auto& list = fn ? d.functions : d.predicates;
        bool dup = std::any_of(list.begin(), list.end(), [&](const PredicateDecl& o) { return o.name == decl.name; });
        if (dup) fail(ErrorKind::DuplicateSymbol, p.items[0].tok.pos, "'" + decl.name + "' declared twice");
        list.push_back(std::move(decl));
      }
    } else if (key == "action" || key == "durative-action") {
      action_nodes.push_back(&sec);
    } else if (key == "constraints" || key == "derived") {
      fail(ErrorKind::UnsupportedRequirement, sec.items[0].tok.pos, "section :" + key + " is not supported");
    } else {
      fail(ErrorKind::SyntaxError, sec.items[0].tok.pos, "unknown domain section :" + key);
    }
  }

  // Parents mentioned only after '-' become children of object.
  for (const auto& [type, pos] : implicit_types) {
    if (!declared_types.count(type)) {
      declared_types.insert(type);
      d.types.push_back(TypedName{type, "object"});
    }
  }
  for (const auto& t : d.types) {
    std::string cur = t.name;
    std::set<std::string> seen;
    while (cur != "object") {
      if (!seen.insert(cur).second) {
        fail(ErrorKind::TypeCycle, implicit_types.count(t.name) ? implicit_types.at(t.name) : root.tok.pos,
             "type hierarchy has a cycle through '" + t.name + "'");
      }
      auto it = std::find_if(d.types.begin(), d.types.end(), [&](const TypedName& x) { return x.name == cur; });
      cur = it == d.types.end() ? "object" : it->type;
    }
  }
  TypeHierarchy types(d);

  Scope base;
  base.domain = &d;
  base.types = &types;
  for (const auto& c : d.constants) {
    if (!types.contains(c.type)) fail(ErrorKind::UndeclaredSymbol, root.tok.pos, "undeclared type '" + c.type + "'");
    base.objects.insert(c.name);
  }

  std::set<std::string> action_names;
  for (const Node* an : action_nodes) {
    const Node& sec = *an;
    bool durative = sec.items[0].tok.text == "durative-action";
    if (sec.items.size() < 2) fail(ErrorKind::SyntaxError, sec.tok.pos, "action without a name");
    const Node& name_node = sec.items[1];
    std::string name = expect_name(name_node, "an action name");
    if (!action_names.insert(name).second) {
      fail(ErrorKind::DuplicateSymbol, name_node.tok.pos, "action '" + name + "' declared twice");
    }
    auto args = keyword_args(sec, 2);
    Scope scope = base;
    std::vector<TypedName> params;
    if (auto it = args.find("parameters"); it != args.end()) params = read_params(*it->second, types, scope);

    if (!durative) {
      ActionSchema a{name, params, Formula::conjunction(), {}};
      for (const auto& [k, v] : args) {
        if (k == "parameters") continue;
        if (k == "precondition") a.precondition = read_formula(*v, scope);
        else if (k == "effect") read_effects(*v, scope, a.effects);
        else fail(ErrorKind::SyntaxError, sec.tok.pos, "unexpected :" + k + " in action");
      }
      d.actions.push_back(std::move(a));
    } else {
      DurativeActionSchema a{name, params, {}, {}, {}};
      for (const auto& [k, v] : args) {
        if (k == "parameters") continue;
        if (k == "duration") {
          read_duration(*v, scope, a.duration);
        } else if (k == "condition") {
          read_timed_conditions(*v, scope, a.conditions);
        } else if (k == "effect") {
          read_timed_effects(*v, scope, a.effects);
        } else {
          fail(ErrorKind::SyntaxError, sec.tok.pos, "unexpected :" + k + " in durative action");
        }
      }
      if (a.duration.empty()) fail(ErrorKind::SyntaxError, name_node.tok.pos, "durative action without :duration");
      d.durative_actions.push_back(std::move(a));
    }
  }
  return d;
}

ProblemModel parse_problem(std::span<const Token> tokens, const DomainModel& domain) {
  Node root = read_document(tokens);
  ProblemModel p;
  check_header(root, "problem", p.name);
  TypeHierarchy types(domain);

  Scope scope;
  scope.domain = &domain;
  scope.types = &types;
  scope.ground = true;
  for (const auto& c : domain.constants) scope.objects.insert(c.name);

  std::vector<const Node*> init_nodes;
  const Node* goal_node = nullptr;
  const Node* metric_node = nullptr;
  bool saw_domain = false;

  for (std::size_t s = 2; s < root.items.size(); ++s) {
    const Node& sec = root.items[s];
    if (!sec.list || sec.items.empty() || !sec.items[0].is(TokenKind::Keyword)) {
      fail(ErrorKind::SyntaxError, sec.tok.pos, "expected a (:section ...)");
    }
    const std::string& key = sec.items[0].tok.text;
    if (key == "domain") {
      if (sec.items.size() != 2) fail(ErrorKind::SyntaxError, sec.tok.pos, "expected (:domain <name>)");
      p.domain_name = expect_name(sec.items[1], "a domain name");
      if (p.domain_name != domain.name) {
        fail(ErrorKind::UnknownDomainReference, sec.items[1].tok.pos,
             "problem refers to domain '" + p.domain_name + "' but '" + domain.name + "' was loaded");
      }
      saw_domain = true;
    } else if (key == "requirements") {
      check_requirements(sec, p.requirements);
    } else if (key == "objects") {
      for (auto& [tn, pos] : typed_list(sec, 1, TokenKind::Symbol)) {
        if (!types.contains(tn.type)) fail(ErrorKind::UndeclaredSymbol, pos, "undeclared type '" + tn.type + "'");
        if (!scope.objects.insert(tn.name).second) fail(ErrorKind::DuplicateSymbol, pos, "object '" + tn.name + "' declared twice");
        p.objects.push_back(tn);
      }
    } else if (key == "init") {
      init_nodes.push_back(&sec);
    } else if (key == "goal") {
      if (sec.items.size() != 2) fail(ErrorKind::SyntaxError, sec.tok.pos, "expected (:goal <condition>)");
      goal_node = &sec.items[1];
    } else if (key == "metric") {
      metric_node = &sec;
    } else {
      fail(ErrorKind::SyntaxError, sec.items[0].tok.pos, "unknown problem section :" + key);
    }
  }
  if (!saw_domain) fail(ErrorKind::SyntaxError, root.tok.pos, "problem lacks (:domain ...)");

  std::vector<std::pair<Atom, Position>> negatives;
  for (const Node* sec : init_nodes) {
    for (std::size_t k = 1; k < sec->items.size(); ++k) {
      const Node& lit = sec->items[k];
      expect_list(lit, "an initial literal");
      if (lit.head_is("=")) {
        if (lit.items.size() != 3 || !lit.items[2].is(TokenKind::Number)) {
          fail(ErrorKind::SyntaxError, lit.tok.pos, "expected (= (<function> ...) <number>)");
        }
        p.numeric_init.push_back(NumericFact{read_atom(lit.items[1], scope, true), Rational::parse(lit.items[2].tok.text)});
        continue;
      }
      if (lit.head_is("at") && lit.items.size() == 3 && lit.items[1].is(TokenKind::Number)) {
        TimedLiteral til;
        til.time = Rational::parse(lit.items[1].tok.text);
        const Node& inner = lit.items[2];
        if (inner.head_is("not")) {
          if (inner.items.size() != 2) fail(ErrorKind::SyntaxError, inner.tok.pos, "'not' takes one argument");
          til.positive = false;
          til.atom = read_atom(inner.items[1], scope, false);
        } else {
          til.atom = read_atom(inner, scope, false);
        }
        p.timed_literals.push_back(std::move(til));
        continue;
      }
      if (lit.head_is("not")) {
        if (lit.items.size() != 2) fail(ErrorKind::SyntaxError, lit.tok.pos, "'not' takes one argument");
        negatives.push_back({read_atom(lit.items[1], scope, false), lit.tok.pos});
        continue;
      }
      p.init.push_back(read_atom(lit, scope, false));
    }
  }
  for (const auto& [atom, pos] : negatives) {
    if (std::find(p.init.begin(), p.init.end(), atom) != p.init.end()) {
      fail(ErrorKind::ContradictoryInit, pos, "initial state both asserts and denies " + print_atom(atom));
    }
  }
  if (goal_node) p.goal = read_formula(*goal_node, scope);
  if (metric_node) {
    const Node& m = *metric_node;
    if (m.items.size() != 3 || !(m.items[1].is_symbol("minimize") || m.items[1].is_symbol("maximize"))) {
      fail(ErrorKind::SyntaxError, m.tok.pos, "expected (:metric minimize|maximize <expr>)");
    }
    Metric metric;
    metric.minimize = m.items[1].is_symbol("minimize");
    const Node& e = m.items[2];
    if (e.list && e.items.size() == 1 && e.items[0].is_symbol("total-time")) {
      metric.total_time = true;
    } else {
      metric.expr = read_numeric(e, scope);
    }
    p.metric = metric;
  }
  return p;
}

DomainModel parse_domain_text(std::string_view text) { return parse_domain(tokenize(text)); }

ProblemModel parse_problem_text(std::string_view text, const DomainModel& domain) {
  return parse_problem(tokenize(text), domain);
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

DomainModel load_domain(const std::string& path) { return parse_domain_text(read_file(path)); }

ProblemModel load_problem(const std::string& path, const DomainModel& domain) {
  return parse_problem_text(read_file(path), domain);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string term_str(const Term& t) { return t.is_variable ? "?" + t.name : t.name; }

std::string op_str(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
  }
  return "=";
}

std::string typed_str(const std::vector<TypedName>& names, bool variables) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += " ";
    out += (variables ? "?" : "") + names[i].name + " - " + names[i].type;
  }
  return out;
}

std::string effect_str(const Effect& e) {
  return e.positive ? print_atom(e.atom) : "(not " + print_atom(e.atom) + ")";
}

std::string when_str(TimeSpec w) {
  switch (w) {
    case TimeSpec::AtStart: return "at start";
    case TimeSpec::OverAll: return "over all";
    case TimeSpec::AtEnd: return "at end";
  }
  return "at start";
}

}  // namespace

std::string print_atom(const Atom& a) {
  std::string out = "(" + a.predicate;
  for (const auto& t : a.args) out += " " + term_str(t);
  return out + ")";
}

std::string print_numeric(const NumericExpr& e) {
  switch (e.kind) {
    case NumericExpr::Kind::Number: return e.value.decimal_str();
    case NumericExpr::Kind::Duration: return "?duration";
    case NumericExpr::Kind::Function: return print_atom(e.function);
    default: break;
  }
  std::string op = e.kind == NumericExpr::Kind::Add ? "+"
                   : e.kind == NumericExpr::Kind::Sub ? "-"
                   : e.kind == NumericExpr::Kind::Mul ? "*"
                                                      : "/";
  std::string out = "(" + op;
  for (const auto& o : e.operands) out += " " + print_numeric(o);
  return out + ")";
}

std::string print_formula(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out = f.kind == Formula::Kind::And ? "(and" : "(or";
      for (const auto& c : f.children) out += " " + print_formula(c);
      return out + ")";
    }
    case Formula::Kind::Not: return "(not " + print_formula(f.children.at(0)) + ")";
    case Formula::Kind::Atom: return print_atom(f.atom);
    case Formula::Kind::Equals: return "(= " + term_str(f.lhs) + " " + term_str(f.rhs) + ")";
    case Formula::Kind::Compare:
      return "(" + op_str(f.op) + " " + print_numeric(f.left) + " " + print_numeric(f.right) + ")";
  }
  return "()";
}

std::string print_domain(const DomainModel& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << " :" << r;
    os << ")\n";
  }
  if (!d.types.empty()) os << "  (:types " << typed_str(d.types, false) << ")\n";
  if (!d.constants.empty()) os << "  (:constants " << typed_str(d.constants, false) << ")\n";
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& p : d.predicates) {
      os << "\n    (" << p.name << (p.params.empty() ? "" : " ") << typed_str(p.params, true) << ")";
    }
    os << ")\n";
  }
  if (!d.functions.empty()) {
    os << "  (:functions";
    for (const auto& p : d.functions) {
      os << "\n    (" << p.name << (p.params.empty() ? "" : " ") << typed_str(p.params, true) << ") - number";
    }
    os << ")\n";
  }
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n";
    os << "    :parameters (" << typed_str(a.params, true) << ")\n";
    os << "    :precondition " << print_formula(a.precondition) << "\n";
    os << "    :effect (and";
    for (const auto& e : a.effects) os << " " << effect_str(e);
    os << "))\n";
  }
  for (const auto& a : d.durative_actions) {
    os << "  (:durative-action " << a.name << "\n";
    os << "    :parameters (" << typed_str(a.params, true) << ")\n";
    os << "    :duration (and";
    for (const auto& b : a.duration) os << " (" << op_str(b.op) << " ?duration " << print_numeric(b.expr) << ")";
    os << ")\n";
    os << "    :condition (and";
    for (const auto& c : a.conditions) os << "\n      (" << when_str(c.when) << " " << print_formula(c.condition) << ")";
    os << ")\n";
    os << "    :effect (and";
    for (const auto& e : a.effects) os << "\n      (" << when_str(e.when) << " " << effect_str(e.effect) << ")";
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const ProblemModel& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  if (!p.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : p.requirements) os << " :" << r;
    os << ")\n";
  }
  if (!p.objects.empty()) os << "  (:objects " << typed_str(p.objects, false) << ")\n";
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << print_atom(a);
  for (const auto& f : p.numeric_init) os << "\n    (= " << print_atom(f.function) << " " << f.value.decimal_str() << ")";
  for (const auto& t : p.timed_literals) {
    os << "\n    (at " << t.time.decimal_str() << " "
       << (t.positive ? print_atom(t.atom) : "(not " + print_atom(t.atom) + ")") << ")";
  }
  os << ")\n";
  os << "  (:goal " << print_formula(p.goal) << ")\n";
  if (p.metric) {
    os << "  (:metric " << (p.metric->minimize ? "minimize " : "maximize ")
       << (p.metric->total_time ? "(total-time)" : print_numeric(p.metric->expr)) << ")\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace chronosat::pddl
