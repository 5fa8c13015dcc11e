#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "chronosat/smt/solver.hpp"
#include "chronosat/smt/term.hpp"
#include "solvers.hpp"

using namespace chronosat;
using namespace chronosat::smt;

namespace {

// x >= y /\ (y > 0 \/ x > 0) /\ y <= 0 over the reals
Formula worked_example() {
  Formula f;
  Term x = f.declare("x", Sort::Real);
  Term y = f.declare("y", Sort::Real);
  Term zero = Term::real(0);
  f.add(conj({x >= y, disj({y > zero, x > zero}), y <= zero}));
  return f;
}

}  // namespace

TEST_CASE("emission of the empty formula") { CHECK(emit_smtlib(Formula{}) == "(set-logic QF_LIA)\n"); }

TEST_CASE("emission of the worked example") {
  std::string text = emit_smtlib(worked_example());
  CHECK(text ==
        "(set-logic QF_LRA)\n"
        "(declare-const x Real)\n"
        "(declare-const y Real)\n"
        "(assert (and (<= y x) (or (< 0.0 y) (< 0.0 x)) (<= y 0.0)))\n");
  CHECK(emit_smtlib(worked_example()) == text);
}

TEST_CASE("numeric literals") {
  CHECK(number_literal(Rational(3), Sort::Int) == "3");
  CHECK(number_literal(Rational(-3), Sort::Int) == "(- 3)");
  CHECK(number_literal(Rational(1, 8), Sort::Real) == "(/ 1.0 8.0)");
  CHECK(number_literal(Rational(-5, 2), Sort::Real) == "(- (/ 5.0 2.0))");
  CHECK_THROWS_AS(number_literal(Rational(1, 2), Sort::Int), SmtError);
}

TEST_CASE("mixed sorts coerce integers") {
  Formula f;
  Term n = f.declare("n", Sort::Int);
  Term x = f.declare("x", Sort::Real);
  f.add(n + Term::integer(1) <= x);
  CHECK(logic_for(f) == "QF_LIRA");
  CHECK(emit_smtlib(f).find("(assert (<= (to_real (+ n 1)) x))") != std::string::npos);
}

TEST_CASE("ill-formed terms are rejected") {
  Term b = Term::var("b", Sort::Bool);
  Term n = Term::var("n", Sort::Int);
  CHECK_THROWS_AS(b + n, SmtError);
  CHECK_THROWS_AS(conj({n}), SmtError);
  CHECK_THROWS_AS(eq(b, n), SmtError);
  CHECK_THROWS_AS(Term::var("1bad", Sort::Int), SmtError);
  Formula f;
  f.add(n >= Term::integer(0));
  CHECK_THROWS_AS(emit_smtlib(f), SmtError);
  Formula g;
  g.declare("n", Sort::Real);
  g.add(n >= Term::integer(0));
  CHECK_THROWS_AS(emit_smtlib(g), SmtError);
  CHECK_THROWS_AS(g.declare("n", Sort::Int), SmtError);
}

TEST_CASE("simplification keeps terms small") {
  Term p = Term::var("p", Sort::Bool);
  CHECK(conj({}).is_true());
  CHECK(disj({}).is_false());
  CHECK(conj({p, Term::boolean(false)}).is_false());
  CHECK(conj({Term::boolean(true), p}).same(p));
  CHECK((!!p).same(p));
  CHECK(implies(Term::boolean(false), p).is_true());
}

TEST_CASE("evaluation") {
  Model m;
  m.set("x", Value{Sort::Real, false, Rational(1, 2)});
  m.set("p", Value{Sort::Bool, true, {}});
  Term x = Term::var("x", Sort::Real);
  Term p = Term::var("p", Sort::Bool);
  CHECK(evaluate(Rational(2) * x + Term::real(1), m).number == Rational(2));
  CHECK(evaluate(ite(p, x, Term::real(5)), m).number == Rational(1, 2));
  CHECK(evaluate(max(x, Term::real(3)), m).number == Rational(3));
  CHECK_THROWS_AS(evaluate(Term::var("z", Sort::Int), m), SmtError);
}

TEST_CASE("reply parsing") {
  CHECK(parse_numeral("(/ 1.0 2.0)") == Rational(1, 2));
  CHECK(parse_numeral("(- 3)") == Rational(-3));
  CHECK(parse_numeral("(- (/ 1 8))") == Rational(-1, 8));
  CHECK(parse_numeral("0.25") == Rational(1, 4));
  auto vals = parse_get_value("((x (/ 1.0 2.0)) (b true) (n (- 4)))");
  REQUIRE(vals.size() == 3);
  CHECK(vals[0].second.number == Rational(1, 2));
  CHECK(vals[1].second.boolean);
  CHECK(vals[2].second.number == Rational(-4));
}

TEST_CASE("check against the solver") {
  SolverSession s(testing::z3_config());
  SUBCASE("false is unsat") {
    Formula f;
    f.add(Term::boolean(false));
    CHECK(check(s, f).verdict == Verdict::Unsat);
  }
  SUBCASE("true with an Int variable") {
    Formula f;
    f.declare("n", Sort::Int);
    f.add(Term::boolean(true));
    auto r = check(s, f);
    REQUIRE(r.verdict == Verdict::Sat);
    CHECK(r.model.get_number("n").is_integer());
  }
  SUBCASE("worked example model has y <= 0 < x") {
    auto r = check(s, worked_example());
    REQUIRE(r.verdict == Verdict::Sat);
    CHECK(r.model.get_number("y") <= Rational(0));
    CHECK(r.model.get_number("x") > Rational(0));
  }
  SUBCASE("session reuse reloads cleanly") {
    Formula f;
    Term x = f.declare("x", Sort::Real);
    f.add(x > Term::real(Rational(1, 3)));
    CHECK(check(s, f).verdict == Verdict::Sat);
    CHECK(check(s, worked_example()).verdict == Verdict::Sat);
    CHECK(s.stats().check_sat_calls == 2);
  }
}

TEST_CASE("minimize") {
  SolverSession s(testing::z3_config());
  SUBCASE("integer lower bound") {
    Formula f;
    Term x = f.declare("x", Sort::Int);
    f.add(x >= Term::integer(3));
    auto r = minimize(s, f, x);
    REQUIRE(r.status == MinimizeStatus::Optimal);
    CHECK(*r.value == Rational(3));
    // post-hoc: nothing strictly better exists
    Formula g = f;
    g.add(x < Term::integer(3));
    CHECK(check(s, g).verdict == Verdict::Unsat);
  }
  SUBCASE("infeasible") {
    Formula f;
    Term x = f.declare("x", Sort::Int);
    f.add(x >= Term::integer(3));
    f.add(x <= Term::integer(2));
    CHECK(minimize(s, f, x).status == MinimizeStatus::Infeasible);
  }
  SUBCASE("open infimum hits the iteration cap") {
    Formula f;
    Term x = f.declare("x", Sort::Real);
    f.add(x > Term::real(0));
    MinimizeOptions opt;
    opt.iteration_cap = 25;
    auto r = minimize(s, f, x, opt);
    CHECK(r.status == MinimizeStatus::Unknown);
    REQUIRE(r.value);
    CHECK(*r.value > Rational(0));
    CHECK(r.iterations == 25);
  }
  SUBCASE("non-strict steps over reals") {
    Formula f;
    Term x = f.declare("x", Sort::Real);
    f.add(x >= Term::real(Rational(5, 2)));
    MinimizeOptions opt;
    opt.strict_step = false;
    auto r = minimize(s, f, x, opt);
    REQUIRE(r.status == MinimizeStatus::Optimal);
    CHECK(*r.value < Rational(7, 2));
  }
}

TEST_CASE("non-incremental minimize restarts the solver") {
  auto cfg = testing::z3_config();
  cfg.incremental = false;
  SolverSession s(cfg);
  Formula f;
  Term x = f.declare("x", Sort::Int);
  Term y = f.declare("y", Sort::Int);
  f.add(conj({x >= Term::integer(0), y >= Term::integer(0), x + y >= Term::integer(4)}));
  auto r = minimize(s, f, Rational(3) * x + y);
  REQUIRE(r.status == MinimizeStatus::Optimal);
  CHECK(*r.value == Rational(4));
}

TEST_CASE("solver failures") {
  SUBCASE("missing binary") {
    SolverConfig c;
    c.command = "/nonexistent/solver";
    try {
      SolverSession s(c);
      Formula f;
      check(s, f);
      FAIL("expected SolverCrashed");
    } catch (const SmtError& e) {
      CHECK(e.kind() == SmtErrorKind::SolverCrashed);
    }
  }
  SUBCASE("process that exits immediately") {
    SolverConfig c;
    c.command = "true";
    c.args = {};
    try {
      SolverSession s(c);
      Formula f;
      check(s, f);
      FAIL("expected SolverCrashed");
    } catch (const SmtError& e) {
      CHECK(e.kind() == SmtErrorKind::SolverCrashed);
    }
  }
  SUBCASE("timeout kills the session") {
    SolverConfig c;
    c.command = "sleep";
    c.args = {"30"};
    c.timeout_s = 0.3;
    SolverSession s(c);
    Formula f;
    auto t0 = std::chrono::steady_clock::now();
    try {
      check(s, f);
      FAIL("expected Timeout");
    } catch (const SmtError& e) {
      CHECK(e.kind() == SmtErrorKind::Timeout);
    }
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
    CHECK_FALSE(s.alive());
  }
}

TEST_CASE("transcripts are logged") {
  auto dir = std::filesystem::temp_directory_path() / "chronosat-smt-log-test";
  std::filesystem::remove_all(dir);
  auto cfg = testing::z3_config();
  cfg.log_dir = dir.string();
  {
    SolverSession s(cfg);
    check(s, worked_example());
  }
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    std::ifstream in(e.path());
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("(check-sat)") != std::string::npos);
    CHECK(text.find("; << ") != std::string::npos);
  }
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("second solver agrees on the worked example") {
  if (!testing::cvc5_available()) return;
  SolverSession s(testing::cvc5_config());
  auto r = check(s, worked_example());
  REQUIRE(r.verdict == Verdict::Sat);
  CHECK(r.model.get_number("x") > Rational(0));
  Formula f;
  Term x = f.declare("x", Sort::Int);
  f.add(x >= Term::integer(3));
  auto m = minimize(s, f, x);
  REQUIRE(m.status == MinimizeStatus::Optimal);
  CHECK(*m.value == Rational(3));
}
