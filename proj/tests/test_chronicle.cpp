#include <doctest.h>

#include "chronosat/chronicle/chronicle.hpp"
#include "chronosat/pddl/parser.hpp"

using namespace chronosat;
using namespace chronosat::chronicle;

namespace {

const char* kSwitchDomain = "(define (domain switch) (:requirements :strips :negative-preconditions)"
                            " (:predicates (on))"
                            " (:action turn_on :parameters () :precondition (not (on)) :effect (on)))";

const char* kHoldDomain = "(define (domain hold) (:requirements :durative-actions :typing)"
                          " (:types item) (:predicates (ready ?i - item) (done ?i - item))"
                          " (:durative-action work :parameters (?i - item) :duration (= ?duration 3)"
                          "  :condition (and (at start (ready ?i)) (over all (ready ?i)))"
                          "  :effect (at end (done ?i))))";

}  // namespace

TEST_CASE("instantaneous template reads before and writes after") {
  auto d = pddl::parse_domain_text(kSwitchDomain);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1), ids);
  REQUIRE(tr.templates.size() == 1);
  const auto& t = tr.templates[0];
  CHECK(t.start == t.end);
  REQUIRE(t.conditions.size() == 1);
  CHECK_FALSE(t.conditions[0].value);
  CHECK(t.conditions[0].start == TimeRef{t.start, Rational(0)});
  CHECK(t.conditions[0].end == TimeRef{t.start, Rational(0)});
  REQUIRE(t.effects.size() == 1);
  CHECK(t.effects[0].value);
  CHECK(t.effects[0].end == TimeRef{t.start, Rational(1)});
  CHECK_FALSE(tr.functions[0].is_static);
}

TEST_CASE("durative template intervals") {
  auto d = pddl::parse_domain_text(kHoldDomain);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1, 2), ids);
  const auto* t = tr.find_template("work");
  REQUIRE(t);
  CHECK(t->start != t->end);
  REQUIRE(t->conditions.size() == 2);
  CHECK(t->conditions[1].start == TimeRef{t->start, Rational(1, 2)});
  CHECK(t->conditions[1].end == TimeRef{t->end, Rational(0)});
  REQUIRE(t->effects.size() == 1);
  CHECK(t->effects[0].start == TimeRef{t->end, Rational(0)});
  CHECK(t->effects[0].end == TimeRef{t->end, Rational(1, 2)});
  CHECK(tr.functions[static_cast<std::size_t>(tr.function_index("ready"))].is_static);
  CHECK_FALSE(tr.functions[static_cast<std::size_t>(tr.function_index("done"))].is_static);
  int linear = 0;
  for (const auto& c : t->constraints) linear += c.kind == Constraint::Kind::Linear;
  CHECK(linear == 5);  // s >= 0, d >= 0, e = s + d, d = 3, s + eps <= e
  CHECK(t->referenced().size() == t->variables.size());
}

TEST_CASE("problem chronicle closes the world and places the goal after the horizon") {
  auto d = pddl::parse_domain_text(kSwitchDomain);
  auto p = pddl::parse_problem_text("(define (problem flip) (:domain switch) (:init) (:goal (on)))", d);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1), ids);
  auto pt = translate_problem(d, p, tr, ids);
  CHECK(pt.chronicle.is_problem());
  REQUIRE(pt.chronicle.effects.size() == 1);
  CHECK_FALSE(pt.chronicle.effects[0].value);
  CHECK(pt.chronicle.effects[0].end == TimeRef{pt.origin, Rational(0)});
  REQUIRE(pt.chronicle.conditions.size() == 1);
  CHECK(pt.chronicle.conditions[0].start == TimeRef{pt.horizon, Rational(1)});
  CHECK(pt.chronicle.conditions[0].value);
}

TEST_CASE("timed literals make a function non-static") {
  auto d = pddl::parse_domain_text(kHoldDomain);
  auto p = pddl::parse_problem_text("(define (problem h) (:domain hold) (:objects a b - item)"
                                    " (:init (ready a) (at 4 (not (ready a)))) (:goal (done a)))",
                                    d);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1), ids);
  auto pt = translate_problem(d, p, tr, ids);
  CHECK_FALSE(pt.functions[static_cast<std::size_t>(tr.function_index("ready"))].is_static);
  CHECK(pt.max_timed_literal == Rational(4));
  // init (ready a), closed world for (ready b) (done a) (done b), one timed literal
  CHECK(pt.chronicle.effects.size() == 5);
  CHECK(pt.chronicle.effects.back().start == TimeRef{pt.origin, Rational(4)});
}

TEST_CASE("instances are variable-disjoint and structurally equal") {
  auto d = pddl::parse_domain_text(kHoldDomain);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1), ids);
  const auto& t = *tr.find_template("work");
  auto a = instantiate(t, 0, ids);
  auto b = instantiate(t, 1, ids);
  auto ra = a.referenced();
  for (int v : b.referenced()) CHECK_FALSE(ra.count(v));
  CHECK(a.label() == "work#0");
  CHECK(b.conditions.size() == t.conditions.size());
  CHECK(b.constraints.size() == t.constraints.size());
  std::string dump_a = debug_dump(a, tr.functions);
  std::string dump_b = debug_dump(b, tr.functions);
  CHECK(dump_a != dump_b);
  CHECK(dump_a.find("ready(v") != std::string::npos);
}

TEST_CASE("disjunctive goals are rejected") {
  auto d = pddl::parse_domain_text(kSwitchDomain);
  auto p = pddl::parse_problem_text("(define (problem f) (:domain switch) (:init) (:goal (or (on) (not (on)))))", d);
  IdAllocator ids;
  auto tr = translate_domain(d, Rational(1), ids);
  try {
    translate_problem(d, p, tr, ids);
    FAIL("expected TranslateError");
  } catch (const TranslateError& e) {
    CHECK(e.kind() == TranslateErrorKind::NonConjunctiveGoal);
  }
}
