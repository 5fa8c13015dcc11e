#include <doctest.h>

#include "chronosat/pddl/parser.hpp"
#include "chronosat/plan/oracle.hpp"
#include "chronosat/plan/plan.hpp"
#include "chronosat/plan/validate.hpp"

using namespace chronosat;
using namespace chronosat::plan;

namespace {

const Rational kEps(1, 1000);

pddl::DomainModel switch_domain() { return pddl::load_domain("tests/data/pddl/switch_domain.pddl"); }

pddl::ProblemModel problem(const pddl::DomainModel& d, const std::string& init, const std::string& goal) {
  return pddl::parse_problem_text("(define (problem p) (:domain " + d.name + ") (:init " + init + ") (:goal " + goal + "))",
                                  d);
}

PlanStep step(Rational s, std::string a, std::vector<std::string> args, Rational d) {
  return PlanStep{s, std::move(a), std::move(args), d};
}

// Durative variant with a lamp that needs power over all of its run.
const char* kLamp = R"(
(define (domain lamp)
  (:requirements :typing :durative-actions :negative-preconditions)
  (:types lamp)
  (:predicates (power) (lit ?l - lamp) (broken ?l - lamp))
  (:durative-action power-up
    :parameters ()
    :duration (= ?duration 2)
    :condition (at start (not (power)))
    :effect (at end (power)))
  (:durative-action glow
    :parameters (?l - lamp)
    :duration (and (>= ?duration 1) (<= ?duration 3))
    :condition (and (over all (power)) (at start (not (broken ?l))))
    :effect (and (at start (lit ?l)) (at end (not (lit ?l)))))
  (:durative-action cut
    :parameters ()
    :duration (= ?duration 1)
    :condition (at start (power))
    :effect (at end (not (power)))))
)";

}  // namespace

TEST_CASE("render_plan format") {
  CHECK(render_plan(Plan{}).empty());
  Plan p;
  p.steps.push_back(step(0, "move", {"r1", "bs"}, 12));
  CHECK(render_plan(p) == "0: (move r1 bs) [12]\n");
  p.steps.push_back(step(Rational(25, 2), "deliver", {"r1"}, Rational(1, 3)));
  CHECK(render_plan(p) == "0: (move r1 bs) [12]\n12.5: (deliver r1) [1/3]\n");
}

TEST_CASE("plan round trip and parsing") {
  Plan p;
  p.steps.push_back(step(Rational(1, 1000), "a", {}, 0));
  p.steps.push_back(step(3, "b", {"x", "y"}, Rational(7, 3)));
  CHECK(parse_plan(render_plan(p)) == p);
  auto q = parse_plan("; comment\n\n 2 : (B X) [1]\n0.5: (a)\n");
  REQUIRE(q.steps.size() == 2);
  CHECK(q.steps[0].action == "a");
  CHECK(q.steps[0].duration == Rational(0));
  CHECK(q.steps[1].args == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(parse_plan("0: move r1"), PlanFormatError);
  CHECK_THROWS_AS(parse_plan("x: (move)"), PlanFormatError);
}

TEST_CASE("plan ordering ties break on action then arguments") {
  Plan p;
  p.steps.push_back(step(1, "b", {"a"}, 0));
  p.steps.push_back(step(1, "a", {"z"}, 0));
  p.steps.push_back(step(1, "a", {"c"}, 0));
  p.steps.push_back(step(0, "z", {}, 0));
  p.sort();
  CHECK(p.steps[0].action == "z");
  CHECK(p.steps[1].args[0] == "c");
  CHECK(p.steps[2].args[0] == "z");
  CHECK(p.steps[3].action == "b");
}

TEST_CASE("validate the switch toy") {
  auto d = switch_domain();
  SUBCASE("empty plan with goal true initially") {
    auto p = problem(d, "(on)", "(on)");
    CHECK(validate(Plan{}, d, p, kEps).valid);
  }
  SUBCASE("empty plan with goal false") {
    auto p = problem(d, "", "(on)");
    auto r = validate(Plan{}, d, p, kEps);
    CHECK_FALSE(r.valid);
    REQUIRE(r.first_violation);
    CHECK(r.first_violation->description.find("goal unsatisfied") == 0);
  }
  SUBCASE("single turn_on") {
    auto p = problem(d, "", "(on)");
    Plan plan;
    plan.steps.push_back(step(4, "turn_on", {}, 0));
    auto r = validate(plan, d, p, kEps);
    CHECK(r.valid);
    CHECK_FALSE(r.trace.empty());
  }
  SUBCASE("precondition fails when already on") {
    auto p = problem(d, "(on)", "(on)");
    Plan plan;
    plan.steps.push_back(step(0, "turn_on", {}, 0));
    CHECK_FALSE(validate(plan, d, p, kEps).valid);
  }
  SUBCASE("instantaneous step with a duration") {
    auto p = problem(d, "", "(on)");
    Plan plan;
    plan.steps.push_back(step(0, "turn_on", {}, 1));
    CHECK_FALSE(validate(plan, d, p, kEps).valid);
  }
  SUBCASE("unknown action and arity") {
    auto p = problem(d, "", "(on)");
    Plan plan;
    plan.steps.push_back(step(0, "fly", {}, 0));
    CHECK_THROWS_AS(validate(plan, d, p, kEps), ValidationError);
    plan.steps[0] = step(0, "turn_on", {"x"}, 0);
    CHECK_THROWS_AS(validate(plan, d, p, kEps), ValidationError);
  }
}

TEST_CASE("epsilon semantics on the lamp domain") {
  auto d = pddl::parse_domain_text(kLamp);
  auto p = pddl::parse_problem_text(
      "(define (problem p) (:domain lamp) (:objects l1 l2 - lamp) (:init (broken l2)) (:goal (power)))", d);
  const Rational e(1);
  SUBCASE("power-up alone") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    CHECK(validate(plan, d, p, e).valid);
  }
  SUBCASE("wrong fixed duration") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 3));
    CHECK_FALSE(validate(plan, d, p, e).valid);
  }
  SUBCASE("glow needs power from start+eps until end") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    plan.steps.push_back(step(2, "glow", {"l1"}, 2));
    // power holds from 3; over-all interval of glow is [3, 4]: fine
    CHECK(validate(plan, d, p, e).valid);
    plan.steps[1] = step(1, "glow", {"l1"}, 2);
    // power-up triggers its effect at 2 inside the over-all window (1, 3)
    CHECK_FALSE(validate(plan, d, p, e).valid);
  }
  SUBCASE("duration bounds") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    plan.steps.push_back(step(2, "glow", {"l1"}, 4));
    CHECK_FALSE(validate(plan, d, p, e).valid);
  }
  SUBCASE("type and static checks") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    plan.steps.push_back(step(2, "glow", {"l2"}, 2));
    CHECK_FALSE(validate(plan, d, p, e).valid);
  }
  SUBCASE("cut then goal fails; effects closer than eps interfere") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    plan.steps.push_back(step(3, "cut", {}, 1));
    auto r = validate(plan, d, p, e);
    CHECK_FALSE(r.valid);
    REQUIRE(r.first_violation);
    CHECK(r.first_violation->kind == Violation::Kind::Goal);
    Plan clash;
    clash.steps.push_back(step(0, "power-up", {}, 2));
    clash.steps.push_back(step(Rational(1, 2), "glow", {"l1"}, Rational(3, 2)));
    // glow's start effect at 1/2 and end effect at 2 are fine, but its over-all needs power
    CHECK_FALSE(validate(clash, d, p, e).valid);
  }
  SUBCASE("condition at the instant of a same-step end effect reads the old value") {
    Plan plan;
    plan.steps.push_back(step(0, "power-up", {}, 2));
    plan.steps.push_back(step(3, "cut", {}, 1));
    plan.steps.push_back(step(4, "power-up", {}, 2));
    // cut's end effect triggers at 4 while power-up checks (not (power)) at 4
    CHECK_FALSE(validate(plan, d, p, e).valid);
    plan.steps[2] = step(5, "power-up", {}, 2);
    CHECK(validate(plan, d, p, e).valid);
  }
}

TEST_CASE("timed literals") {
  auto d = pddl::parse_domain_text(
      "(define (domain w) (:requirements :durative-actions :timed-initial-literals)"
      " (:predicates (open) (done))"
      " (:durative-action act :parameters () :duration (= ?duration 2)"
      "  :condition (at end (open)) :effect (at end (done))))");
  auto p = pddl::parse_problem_text(
      "(define (problem p) (:domain w) (:init (at 3 (open)) (at 6 (not (open)))) (:goal (done)))", d);
  const Rational e(1);
  Plan plan;
  plan.steps.push_back(step(2, "act", {}, 2));
  CHECK(validate(plan, d, p, e).valid);
  plan.steps[0] = step(1, "act", {}, 2);
  CHECK_FALSE(validate(plan, d, p, e).valid);
  plan.steps[0] = step(4, "act", {}, 2);
  // the window closes at 6: the end condition still reads the old value
  CHECK(validate(plan, d, p, e).valid);
  plan.steps[0] = step(5, "act", {}, 2);
  CHECK_FALSE(validate(plan, d, p, e).valid);
}

TEST_CASE("oracle on the switch toy") {
  auto d = switch_domain();
  auto p = problem(d, "", "(on)");
  OracleLimits lim;
  lim.occurrences["turn_on"] = 1;
  lim.collect_all = true;
  auto r = brute_force_oracle(d, p, lim, Rational(1));
  CHECK(r.sat);
  REQUIRE(r.plans.size() == 11);
  for (std::size_t i = 0; i < r.plans.size(); ++i) {
    REQUIRE(r.plans[i].steps.size() == 1);
    CHECK(r.plans[i].steps[0].action == "turn_on");
    CHECK(r.plans[i].steps[0].start == Rational(static_cast<std::int64_t>(i)));
  }
  OracleLimits none;
  CHECK_FALSE(brute_force_oracle(d, p, none, Rational(1)).sat);
}

TEST_CASE("oracle finds the lamp plan and respects guards") {
  auto d = pddl::parse_domain_text(kLamp);
  auto p = pddl::parse_problem_text(
      "(define (problem p) (:domain lamp) (:objects l1 - lamp) (:init) (:goal (and (power) (not (lit l1)))))", d);
  OracleLimits lim;
  lim.occurrences = {{"power-up", 2}, {"glow", 1}, {"cut", 1}};
  auto r = brute_force_oracle(d, p, lim, Rational(1));
  REQUIRE(r.sat);
  CHECK(validate(r.plans[0], d, p, Rational(1)).valid);

  OracleLimits big = lim;
  big.horizon = Rational(100);
  CHECK_THROWS_AS(brute_force_oracle(d, p, big, Rational(1)), SearchSpaceTooLarge);
  OracleLimits tiny = lim;
  tiny.max_nodes = 1;
  auto q = pddl::parse_problem_text(
      "(define (problem p) (:domain lamp) (:objects l1 - lamp) (:init) (:goal (and (lit l1) (not (power)))))", d);
  CHECK_THROWS_AS(brute_force_oracle(d, q, tiny, Rational(1)), SearchSpaceTooLarge);
}
