#include <doctest.h>

#include <filesystem>

#include "chronosat/pddl/lexer.hpp"
#include "chronosat/pddl/parser.hpp"
#include "chronosat/pddl/types.hpp"

using namespace chronosat;
using namespace chronosat::pddl;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view text) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : tokenize(text)) out.push_back({t.kind, t.text});
  return out;
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const PddlError& e) {
    return e.kind();
  }
  FAIL("expected a PddlError");
  return ErrorKind::SyntaxError;
}

const char* kSwitch = "(define (domain switch) (:predicates (on))"
                      " (:action turn_on :parameters () :precondition (not (on)) :effect (on)))";

}  // namespace

TEST_CASE("tokenize define header") {
  using K = TokenKind;
  std::vector<std::pair<K, std::string>> expected{{K::Open, "("},    {K::Symbol, "define"}, {K::Open, "("},
                                                  {K::Symbol, "domain"}, {K::Symbol, "d"},   {K::Close, ")"},
                                                  {K::Close, ")"}};
  CHECK(kinds("(define (domain d))") == expected);
}

TEST_CASE("tokenize typed variable") {
  using K = TokenKind;
  std::vector<std::pair<K, std::string>> expected{{K::Variable, "r"}, {K::Symbol, "-"}, {K::Symbol, "robot"}};
  CHECK(kinds("?r - robot") == expected);
}

TEST_CASE("tokenize strips comments and records positions") {
  using K = TokenKind;
  std::vector<std::pair<K, std::string>> expected{{K::Open, "("}, {K::Keyword, "goal"}, {K::Close, ")"}};
  CHECK(kinds("; comment\n(:goal)") == expected);
  auto toks = tokenize("; c\n  (:goal)");
  CHECK(toks[1].pos.line == 2);
  CHECK(toks[1].pos.column == 4);
}

TEST_CASE("tokenize lexical errors carry positions") {
  try {
    tokenize("(a \"open");
    FAIL("no error");
  } catch (const PddlError& e) {
    CHECK(e.kind() == ErrorKind::UnterminatedString);
    CHECK(e.position().line == 1);
    CHECK(e.position().column == 4);
  }
  try {
    tokenize("(a\n  b # c)");
    FAIL("no error");
  } catch (const PddlError& e) {
    CHECK(e.kind() == ErrorKind::IllegalCharacter);
    CHECK(e.position().line == 2);
    CHECK(e.position().column == 5);
  }
}

TEST_CASE("symbols are case-insensitive") {
  auto d = parse_domain_text("(DEFINE (Domain MiXed) (:PREDICATES (Foo ?X)))");
  CHECK(d.name == "mixed");
  REQUIRE(d.predicates.size() == 1);
  CHECK(d.predicates[0].name == "foo");
  CHECK(d.predicates[0].params[0].name == "x");
}

TEST_CASE("empty domain") {
  auto d = parse_domain_text("(define (domain empty))");
  CHECK(d.name == "empty");
  CHECK(d.actions.empty());
  CHECK(d.durative_actions.empty());
  CHECK(d.predicates.empty());
}

TEST_CASE("fixed duration") {
  auto d = parse_domain_text(
      "(define (domain d) (:requirements :durative-actions) (:predicates (p))"
      " (:durative-action a :parameters () :duration (= ?duration 5)"
      " :condition (at start (p)) :effect (at end (not (p)))))");
  REQUIRE(d.durative_actions.size() == 1);
  const auto& a = d.durative_actions[0];
  REQUIRE(a.duration.size() == 1);
  CHECK(a.duration[0].op == CompareOp::Eq);
  CHECK(a.duration[0].expr == NumericExpr::number(Rational(5)));
  REQUIRE(a.conditions.size() == 1);
  CHECK(a.conditions[0].when == TimeSpec::AtStart);
  REQUIRE(a.effects.size() == 1);
  CHECK(a.effects[0].when == TimeSpec::AtEnd);
  CHECK_FALSE(a.effects[0].effect.positive);
}

TEST_CASE("domain semantic errors") {
  CHECK(error_of([] { parse_domain_text("(define (domain d) (:requirements :adl))"); }) ==
        ErrorKind::UnsupportedRequirement);
  CHECK(error_of([] {
          parse_domain_text("(define (domain d) (:predicates (p ?x)) (:action a :parameters (?y) :effect (p ?y ?y)))");
        }) == ErrorKind::ArityMismatch);
  CHECK(error_of([] {
          parse_domain_text("(define (domain d) (:predicates (p ?x)) (:action a :parameters () :effect (q)))");
        }) == ErrorKind::UndeclaredSymbol);
  CHECK(error_of([] {
          parse_domain_text("(define (domain d) (:predicates (p ?x)) (:action a :parameters () :effect (p ?z)))");
        }) == ErrorKind::UndeclaredSymbol);
  CHECK(error_of([] {
          parse_domain_text("(define (domain d) (:predicates (p)) (:action a :parameters (?x ?x) :effect (p)))");
        }) == ErrorKind::DuplicateSymbol);
  CHECK(error_of([] {
          parse_domain_text(
              "(define (domain d) (:predicates (p)) (:action a :parameters () :effect (p))"
              " (:durative-action a :parameters () :duration (= ?duration 1) :effect (at end (p))))");
        }) == ErrorKind::DuplicateSymbol);
  CHECK(error_of([] { parse_domain_text("(define (domain d) (:types a - b b - a))"); }) == ErrorKind::TypeCycle);
  CHECK(error_of([] {
          parse_domain_text(
              "(define (domain d) (:functions (f)) (:action a :parameters () :effect (increase (f) 1)))");
        }) == ErrorKind::UnsupportedRequirement);
  CHECK(error_of([] { parse_domain_text("(define (domain d) (:predicates (p))"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("error position lies inside the offending token") {
  std::string text = "(define (domain d)\n  (:predicates (p ?x))\n  (:action a :parameters () :effect (qq)))";
  try {
    parse_domain_text(text);
    FAIL("no error");
  } catch (const PddlError& e) {
    CHECK(e.kind() == ErrorKind::UndeclaredSymbol);
    CHECK(e.position().line == 3);
    CHECK(e.position().column == 38);
    CHECK(e.position().length == 2);
  }
}

TEST_CASE("problem parsing") {
  auto d = parse_domain_text(kSwitch);
  SUBCASE("empty goal is trivially true") {
    auto p = parse_problem_text("(define (problem p) (:domain switch) (:init) (:goal (and)))", d);
    CHECK(p.goal == Formula::conjunction());
    CHECK(p.init.empty());
  }
  SUBCASE("undeclared object type") {
    CHECK(error_of([&] { parse_problem_text("(define (problem p) (:domain switch) (:objects x - robot))", d); }) ==
          ErrorKind::UndeclaredSymbol);
  }
  SUBCASE("wrong domain") {
    CHECK(error_of([&] { parse_problem_text("(define (problem p) (:domain other))", d); }) ==
          ErrorKind::UnknownDomainReference);
  }
  SUBCASE("contradictory init") {
    CHECK(error_of([&] { parse_problem_text("(define (problem p) (:domain switch) (:init (on) (not (on))))", d); }) ==
          ErrorKind::ContradictoryInit);
  }
  SUBCASE("goal over undeclared object") {
    auto d2 = parse_domain_text("(define (domain q) (:predicates (p ?x)))");
    CHECK(error_of([&] { parse_problem_text("(define (problem p) (:domain q) (:goal (p zz)))", d2); }) ==
          ErrorKind::UndeclaredSymbol);
  }
}

TEST_CASE("timed literals and numeric init") {
  auto d = load_domain("tests/data/pddl/rover_domain.pddl");
  auto p = load_problem("tests/data/pddl/rover_problem.pddl", d);
  REQUIRE(p.timed_literals.size() == 1);
  CHECK(p.timed_literals[0].time == Rational(30));
  CHECK_FALSE(p.timed_literals[0].positive);
  CHECK(p.numeric_init.size() == 4);
  CHECK(p.numeric_init[1].value == Rational(7, 2));
  REQUIRE(p.metric.has_value());
  CHECK(p.metric->total_time);
  // the negative init literal is implied by the closed world
  CHECK(p.init.size() == 2);
}

TEST_CASE("object table groups types contiguously") {
  auto d = load_domain("tests/data/pddl/rover_domain.pddl");
  auto p = load_problem("tests/data/pddl/rover_problem.pddl", d);
  ObjectTable objects(d, p);
  CHECK(objects.size() == 5);
  const auto& wps = objects.of_type("waypoint");
  REQUIRE(wps.size() == 3);
  CHECK(wps[1] == wps[0] + 1);
  CHECK(wps[2] == wps[1] + 1);
  CHECK(objects.has_type(objects.id("r1"), "vehicle"));
  CHECK(objects.of_type("vehicle").size() == 1);
  CHECK_FALSE(objects.has_type(objects.id("s1"), "vehicle"));
}

TEST_CASE("print/parse round trip") {
  for (const auto& [dom, prob] : std::vector<std::pair<std::string, std::string>>{
           {"tests/data/pddl/switch_domain.pddl", "tests/data/pddl/switch_problem.pddl"},
           {"tests/data/pddl/rover_domain.pddl", "tests/data/pddl/rover_problem.pddl"},
           {"data/rcll/domain.pddl", ""}}) {
    CAPTURE(dom);
    if (!std::filesystem::exists(dom)) continue;
    auto d = load_domain(dom);
    auto printed = print_domain(d);
    auto d2 = parse_domain_text(printed);
    CHECK(d2 == d);
    CHECK(print_domain(d2) == printed);
    if (!prob.empty()) {
      auto p = load_problem(prob, d);
      auto p2 = parse_problem_text(print_problem(p), d2);
      CHECK(p2 == p);
    }
  }
}
