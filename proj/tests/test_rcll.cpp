#include <doctest.h>

#include <fstream>
#include <sstream>

#include "chronosat/bench/generator.hpp"
#include "chronosat/pddl/parser.hpp"
#include "chronosat/plan/validate.hpp"
#include "chronosat/rcll/encoder.hpp"
#include "chronosat/smt/solver.hpp"
#include "solvers.hpp"
#include "support/rcll_sim.hpp"

using namespace chronosat;
using namespace chronosat::rcll;

namespace {

const Rational kEps(1, 1000);

RcllInstance unit_instance(Complexity c, int payment = 0) {
  auto inst = RcllInstance::standard(1);
  auto pos = inst.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) inst.set_travel(pos[i], pos[j], Rational(static_cast<std::int64_t>(i + j)));
  }
  std::int64_t d = 5;
  for (const auto& k : operation_kinds()) inst.durations[k] = Rational(d++);
  Order o;
  o.id = "o1";
  o.complexity = c;
  o.base_color = "red";
  o.cap_color = "grey";
  if (c == Complexity::C1) {
    o.ring_colors = {"blue"};
    o.ring_payment = {payment};
  }
  o.open = Rational(0);
  o.close = Rational(10000);
  inst.orders.push_back(o);
  return inst;
}

struct Solved {
  smt::Verdict verdict;
  plan::Plan plan;
  std::optional<Rational> cost;
};

Solved solve(const RcllInstance& inst, int p, Granularity g, bool optimal = false) {
  auto enc = encode_feasible(inst, p, g, kEps);
  smt::SolverSession session(testing::z3_config());
  Solved out{smt::Verdict::Unknown, {}, std::nullopt};
  if (optimal) {
    smt::Term objective = encode_cost(enc);
    auto r = smt::minimize(session, enc.formula, objective);
    if (r.status == smt::MinimizeStatus::Infeasible) out.verdict = smt::Verdict::Unsat;
    if (r.status == smt::MinimizeStatus::Optimal) {
      out.verdict = smt::Verdict::Sat;
      out.plan = decode_rcll(r.model, enc, inst);
      out.cost = r.value;
    }
    return out;
  }
  auto r = smt::check(session, enc.formula);
  out.verdict = r.verdict;
  if (r.verdict == smt::Verdict::Sat) out.plan = decode_rcll(r.model, enc, inst);
  return out;
}

bool valid(const plan::Plan& plan, const RcllInstance& inst) {
  auto domain = pddl::parse_domain_text(domain_pddl());
  auto problem = pddl::parse_problem_text(problem_pddl(inst), domain);
  auto report = plan::validate(plan, domain, problem, kEps);
  if (!report.valid && report.first_violation) MESSAGE(report.first_violation->description);
  return report.valid;
}

}  // namespace


TEST_CASE("instance file round trip") {
  auto inst = bench::generate_instance(7, Complexity::C1, 2);
  auto text = write_instance(inst);
  auto back = read_instance(text);
  CHECK(write_instance(back) == text);
  CHECK(back.orders.size() == 1);
  CHECK(back.robot_count == 2);
}

TEST_CASE("instance reader rejects malformed lines") {
  CHECK_THROWS_AS(read_instance("robots 1\nbogus line\n"), InstanceError);
  auto text = write_instance(unit_instance(Complexity::C0));
  CHECK_THROWS_AS(read_instance(text + "order o2 C1 base red rings - cap grey payment - window 0 5\n"), InstanceError);
}

TEST_CASE("bundled domain matches the data file") {
  std::ifstream in("data/rcll/domain.pddl");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(domain_pddl() == ss.str());
}

TEST_CASE("problem export parses and round-trips") {
  auto domain = pddl::parse_domain_text(domain_pddl());
  for (auto c : {Complexity::C0, Complexity::C1}) {
    auto inst = bench::generate_instance(11, c, 3);
    auto problem = pddl::parse_problem_text(problem_pddl(inst), domain);
    CHECK(problem.goal.children.size() == 1);
    auto printed = pddl::print_problem(problem);
    CHECK(pddl::print_problem(pddl::parse_problem_text(printed, domain)) == printed);
  }
}

TEST_CASE("step upper bounds") {
  CHECK(upper_bound_steps(unit_instance(Complexity::C0), Granularity::Macro) == 3);
  CHECK(upper_bound_steps(unit_instance(Complexity::C0), Granularity::Fine) == 7);
  CHECK(upper_bound_steps(unit_instance(Complexity::C1, 0), Granularity::Macro) == 4);
  CHECK(upper_bound_steps(unit_instance(Complexity::C1, 2), Granularity::Macro) == 5);
  CHECK(upper_bound_steps(unit_instance(Complexity::C1, 2), Granularity::Fine) == 14);
  auto two = unit_instance(Complexity::C0);
  two.orders.push_back(two.orders[0]);
  two.orders[1].id = "o2";
  CHECK(upper_bound_steps(two, Granularity::Macro) == 6);
}

TEST_CASE("step bound below one is rejected") {
  CHECK_THROWS_AS(encode_feasible(unit_instance(Complexity::C0), 0, Granularity::Macro), InvalidBound);
}

TEST_CASE("macro alphabet and durations") {
  auto inst = unit_instance(Complexity::C1, 2);
  auto macro = action_alphabet(inst, Granularity::Macro);
  REQUIRE(macro.size() == 6);
  CHECK(macro[0].prims.empty());
  CHECK(macro[1].name == "BUFFER-CAP r1 cs1");
  CHECK(macro[3].name == "PAY r1 o1");
  CHECK(macro[3].prims.size() == 4);

  auto flat = RcllInstance::standard(1);
  auto pos = flat.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) flat.set_travel(pos[i], pos[j], Rational(0));
  }
  flat.durations = inst.durations;
  flat.orders = inst.orders;
  auto base_to = action_alphabet(flat, Granularity::Macro)[2];
  REQUIRE(base_to.name == "BASE-TO r1 o1");
  Rational sum = flat.duration("get-base") + flat.duration("feed-ring");
  CHECK(action_duration(flat, base_to, kStart, Rational(0)) == sum);
  CHECK(action_duration(flat, base_to, kStart, kEps) == sum + kEps);
}

TEST_CASE("fine alphabet covers moves and machine-only mounting") {
  auto inst = unit_instance(Complexity::C1, 1);
  auto fine = action_alphabet(inst, Granularity::Fine);
  int moves = 0, mounts = 0;
  for (const auto& a : fine) {
    for (const auto& p : a.prims) {
      moves += p.kind == PrimKind::Move;
      if (p.kind == PrimKind::MountRing) {
        ++mounts;
        CHECK(p.robot == -1);
      }
    }
  }
  CHECK(moves == 6);
  CHECK(mounts == 1);
}

TEST_CASE("already delivered order is satisfied by a no-op") {
  auto inst = unit_instance(Complexity::C0);
  inst.orders[0].delivered = true;
  auto r = solve(inst, 1, Granularity::Macro, true);
  REQUIRE(r.verdict == smt::Verdict::Sat);
  CHECK(r.plan.empty());
  CHECK(*r.cost == Rational(0));
}

TEST_CASE("window closed at zero is unsatisfiable at every bound") {
  auto inst = unit_instance(Complexity::C0);
  inst.orders[0].close = Rational(0);
  for (int p = 1; p <= upper_bound_steps(inst, Granularity::Macro); ++p) {
    CHECK(solve(inst, p, Granularity::Macro).verdict == smt::Verdict::Unsat);
  }
}

TEST_CASE("macro C0 at three steps decodes to a valid plan") {
  auto inst = bench::generate_instance(3, Complexity::C0, 1);
  auto r = solve(inst, 3, Granularity::Macro);
  REQUIRE(r.verdict == smt::Verdict::Sat);
  CHECK(r.plan.steps.size() == 7);
  CHECK(valid(r.plan, inst));
  CHECK(solve(inst, 2, Granularity::Macro).verdict == smt::Verdict::Unsat);
}

TEST_CASE("ring payment needs the payment macro") {
  auto inst = unit_instance(Complexity::C1, 2);
  CHECK(solve(inst, 4, Granularity::Macro).verdict == smt::Verdict::Unsat);
  auto r = solve(inst, 5, Granularity::Macro);
  REQUIRE(r.verdict == smt::Verdict::Sat);
  CHECK(valid(r.plan, inst));
  int feeds = 0;
  for (const auto& s : r.plan.steps) feeds += s.action == "feed-payment";
  CHECK(feeds == 2);
}

TEST_CASE("fine C1 plan is valid and respects the window") {
  auto inst = unit_instance(Complexity::C1, 1);
  auto r = solve(inst, upper_bound_steps(inst, Granularity::Fine), Granularity::Fine);
  REQUIRE(r.verdict == smt::Verdict::Sat);
  CHECK(valid(r.plan, inst));
  for (const auto& s : r.plan.steps) {
    if (s.action == "deliver") CHECK(s.start + s.duration <= inst.orders[0].close);
  }
}

TEST_CASE("open window delays delivery") {
  auto inst = unit_instance(Complexity::C0);
  inst.orders[0].open = Rational(500);
  auto r = solve(inst, 3, Granularity::Macro, true);
  REQUIRE(r.verdict == smt::Verdict::Sat);
  CHECK(valid(r.plan, inst));
  auto oracle = testing::simulate_rcll(inst, Granularity::Macro, 3, kEps);
  CHECK(*r.cost == *oracle.best_cost[3]);
}

TEST_CASE("verdicts and optima match the simulator") {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (auto c : {Complexity::C0, Complexity::C1}) {
      auto inst = bench::generate_instance(seed, c, seed % 2 == 0 ? 2 : 1);
      int ub = upper_bound_steps(inst, Granularity::Macro);
      auto oracle = testing::simulate_rcll(inst, Granularity::Macro, ub, kEps);
      for (int p = 1; p <= ub; ++p) {
        CAPTURE(seed);
        CAPTURE(p);
        bool sat = solve(inst, p, Granularity::Macro).verdict == smt::Verdict::Sat;
        CHECK(sat == oracle.feasible(p));
        ++compared;
      }
      auto best = solve(inst, ub, Granularity::Macro, true);
      REQUIRE(best.verdict == smt::Verdict::Sat);
      CHECK(*best.cost == *oracle.best_cost[ub]);
      CHECK(valid(best.plan, inst));
    }
  }
  CHECK(compared >= 20);
}

TEST_CASE("fine verdicts match the simulator on C0") {
  auto inst = unit_instance(Complexity::C0);
  auto oracle = testing::simulate_rcll(inst, Granularity::Fine, 7, kEps);
  CHECK(oracle.min_steps == 7);
  for (int p = 5; p <= 7; ++p) {
    CHECK((solve(inst, p, Granularity::Fine).verdict == smt::Verdict::Sat) == oracle.feasible(p));
  }
  auto best = solve(inst, 7, Granularity::Fine, true);
  REQUIRE(best.verdict == smt::Verdict::Sat);
  CHECK(*best.cost == *oracle.best_cost[7]);
}

TEST_CASE("delivery sum separates two orders") {
  auto inst = unit_instance(Complexity::C0);
  inst.orders.push_back(inst.orders[0]);
  inst.orders[1].id = "o2";
  inst.orders[1].cap_color = "black";
  auto oracle = testing::simulate_rcll(inst, Granularity::Macro, 6, kEps);
  auto best = solve(inst, 6, Granularity::Macro, true);
  REQUIRE(best.verdict == smt::Verdict::Sat);
  CHECK(*best.cost == *oracle.best_cost[6]);
  CHECK(valid(best.plan, inst));
  Rational last;
  for (const auto& s : best.plan.steps) last = std::max(last, s.start + s.duration);
  CHECK(*best.cost > last);
}

TEST_CASE("generator determinism and palettes") {
  auto a = write_instance(bench::generate_instance(99, Complexity::C1, 3));
  CHECK(a == write_instance(bench::generate_instance(99, Complexity::C1, 3)));
  CHECK(a != write_instance(bench::generate_instance(100, Complexity::C1, 3)));
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto c0 = bench::generate_instance(s, Complexity::C0, 1);
    CHECK(c0.orders[0].ring_colors.empty());
    auto c1 = bench::generate_instance(s, Complexity::C1, 1);
    REQUIRE(c1.orders[0].ring_colors.size() == 1);
    CHECK(c1.orders[0].payment() >= 0);
    CHECK(c1.orders[0].payment() <= 2);
    CHECK(c1.orders[0].close == Rational(4) * bench::macro_plan_duration(c1));
    for (const auto& [k, t] : c1.travel) {
      CHECK(t >= Rational(5));
      CHECK(t <= Rational(40));
    }
  }
}

TEST_CASE("splitmix reference values") {
  bench::SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
}
