#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronosat/bench/generator.hpp"
#include "chronosat/bench/harness.hpp"
#include "chronosat/bench/process.hpp"
#include "solvers.hpp"

using namespace chronosat;
using namespace chronosat::bench;
namespace fs = std::filesystem;

namespace {

struct TempRoot {
  fs::path path;
  explicit TempRoot(const std::string& tag) {
    path = fs::temp_directory_path() / ("chronosat-bench-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempRoot() { fs::remove_all(path); }
};

BenchConfig small(const TempRoot& root, std::vector<PlannerSpec> planners) {
  BenchConfig c;
  c.root = root.path.string();
  c.suite = "t";
  c.seed = 7;
  c.grid = {{rcll::Complexity::C0, 1}};
  c.instances_per_cell = 2;
  c.timeout_s = 30;
  c.grace_s = 0.2;
  c.planners = std::move(planners);
  return c;
}

PlannerSpec macro() {
  auto all = standard_planners(testing::z3_config(), Rational(1, 1000));
  return all.front();
}

PlannerSpec shell(std::string label, std::string command) { return PlannerSpec{std::move(label), std::nullopt, std::move(command), false}; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BenchRow row(std::string planner, RunOutcome o, double runtime, std::optional<Rational> cost = std::nullopt) {
  BenchRow r;
  r.planner = std::move(planner);
  r.complexity = rcll::Complexity::C1;
  r.robots = 2;
  r.instance = "c1-r2-000001";
  r.outcome = o;
  r.runtime_s = runtime;
  r.cost = cost;
  return r;
}

}  // namespace

TEST_CASE("standard planner labels") {
  auto all = standard_planners(testing::z3_config(), Rational(1, 1000));
  std::vector<std::string> labels;
  for (const auto& p : all) labels.push_back(p.label);
  CHECK(labels == std::vector<std::string>{"rcll-macro", "rcll-macro-opt", "rcll-fine", "rcll-fine-opt", "lifted",
                                           "lifted-conf"});
  CHECK(all.back().occurrences_from_instance);
}

TEST_CASE("config checks") {
  TempRoot root("cfg");
  auto c = small(root, {macro()});
  CHECK_NOTHROW(c.check());
  c.workers = 0;
  CHECK_THROWS_AS(c.check(), pipeline::ConfigError);
  c = small(root, {macro(), macro()});
  CHECK_THROWS_AS(c.check(), pipeline::ConfigError);
  c = small(root, {shell("a,b", "true")});
  CHECK_THROWS_AS(c.check(), pipeline::ConfigError);
  c = small(root, {});
  CHECK_THROWS_AS(c.check(), pipeline::ConfigError);
  BenchConfig d;
  CHECK(d.cells().size() == 6);
  CHECK(cell_name(d.cells()[4]) == "c1-r2");
}

TEST_CASE("materialize lays out the suite") {
  TempRoot root("mat");
  auto c = small(root, {macro()});
  auto dirs = materialize(c);
  REQUIRE(dirs.size() == 2);
  CHECK(fs::path(dirs[1]) == root.path / "t" / "c0-r1" / "c0-r1-000002");
  CHECK(fs::exists(root.path / "t" / "domain.pddl"));
  auto inst = rcll::load_instance((fs::path(dirs[0]) / "instance.rcll").string());
  auto again = generate_instance(cell_seed(7, rcll::Complexity::C0, 1, 1), rcll::Complexity::C0, 1);
  again.name = inst.name;
  CHECK(rcll::write_instance(inst) == rcll::write_instance(again));
  CHECK(slurp(fs::path(dirs[0]) / "problem.pddl") == rcll::problem_pddl(inst));
}

TEST_CASE("in-process run records validated plans and resumes") {
  TempRoot root("run");
  auto c = small(root, {macro()});
  auto rows = run_suite(c);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.outcome == RunOutcome::Solved);
    CHECK(r.cost.has_value());
    CHECK(fs::exists(r.plan_path));
  }
  auto csv = slurp(root.path / "t" / "runs.csv");
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);

  auto again = run_suite(c);
  CHECK(again.size() == 2);
  CHECK(read_runs((root.path / "t" / "runs.csv").string()).size() == 2);

  c.seed = 8;
  CHECK_THROWS_AS(run_suite(c), pipeline::ConfigError);
}

TEST_CASE("external commands map exit codes") {
  TempRoot root("ext");
  auto c = small(root, {shell("fail", "echo broken >&2; exit 3"), shell("none", "exit 10"),
                        shell("slow", "sleep 5"), shell("bogus", "echo '0: (deliver r1 ds o1) [1]' > {plan}")});
  c.instances_per_cell = 1;
  c.timeout_s = 0.3;
  auto rows = run_suite(c);
  REQUIRE(rows.size() == 4);
  std::map<std::string, BenchRow> by;
  for (auto& r : rows) by[r.planner] = r;
  CHECK(by["fail"].outcome == RunOutcome::Error);
  CHECK(by["fail"].diagnostics.find("exit 3") != std::string::npos);
  CHECK(by["fail"].diagnostics.find("broken") != std::string::npos);
  CHECK(by["none"].outcome == RunOutcome::NoPlan);
  CHECK(by["slow"].outcome == RunOutcome::Timeout);
  CHECK(by["slow"].runtime_s < 2);
  CHECK(by["bogus"].outcome == RunOutcome::Error);
  INFO(by["bogus"].diagnostics);
  CHECK(by["bogus"].diagnostics.find("validation") != std::string::npos);
}

TEST_CASE("external command placeholders") {
  TempRoot root("ph");
  auto c = small(root, {shell("echo", "test -f {domain} && test -f {problem} && test -f {instance} && echo {timeout} > "
                                      "{plan}.seen; exit 10")});
  c.instances_per_cell = 1;
  c.timeout_s = 4;
  auto rows = run_suite(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].outcome == RunOutcome::NoPlan);
  CHECK(slurp(root.path / "t" / "c0-r1" / "c0-r1-000001" / "echo.plan.seen") == "4.000\n");
}

TEST_CASE("process timeout kills the group") {
  TempRoot root("proc");
  fs::create_directories(root.path);
  auto log = (root.path / "log").string();
  auto r = run_shell("sleep 10 & sleep 10", 0.2, log);
  CHECK(r.timed_out);
  CHECK(r.seconds < 1.5);
  auto ok = run_shell("echo hi; exit 4", 5, log);
  CHECK_FALSE(ok.timed_out);
  CHECK(ok.exit_code == 4);
  CHECK(slurp(log) == "hi\n");
  CHECK(shell_quote("it's") == "'it'\\''s'");
}

TEST_CASE("csv round trip") {
  auto r = row("p", RunOutcome::Error, 1.25, Rational(7, 2));
  r.diagnostics = "line one, \"two\"\nthree";
  r.plan_path = "a/b.plan";
  std::string text = csv_header() + "\n" + csv_row(r) + "\n";
  TempRoot root("csv");
  fs::create_directories(root.path);
  {
    std::ofstream(root.path / "runs.csv") << text;
  }
  auto back = read_runs((root.path / "runs.csv").string());
  REQUIRE(back.size() == 1);
  CHECK(back[0].diagnostics == r.diagnostics);
  CHECK(back[0].cost == Rational(7, 2));
  CHECK(back[0].runtime_s == doctest::Approx(1.25));
  CHECK(back[0].outcome == RunOutcome::Error);
  CHECK(back[0].plan_path == "a/b.plan");
}

TEST_CASE("summaries average solved runs only") {
  std::vector<BenchRow> rows = {row("a", RunOutcome::Solved, 2, Rational(10)), row("a", RunOutcome::Timeout, 60),
                                row("b", RunOutcome::NoPlan, 1)};
  auto cells = summarize(rows);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].solved == 1);
  CHECK(cells[0].attempted == 2);
  CHECK(*cells[0].mean_runtime_s == doctest::Approx(2));
  CHECK(*cells[0].mean_cost == Rational(10));
  CHECK_FALSE(cells[1].mean_runtime_s.has_value());
  auto csv = summary_csv(cells);
  CHECK(csv == "planner,complexity,robots,solved,attempted,mean_runtime_s,mean_cost\n"
               "a,C1,2,1,2,2.000,10.000\n"
               "b,C1,2,0,1,--,--\n");
  auto table = summary_table(cells);
  CHECK(table.find("1/2  2.000") != std::string::npos);
  CHECK(table.find("0/1  --") != std::string::npos);
  CHECK(table.find("C0") == std::string::npos);
}

TEST_CASE("emit tables writes both files") {
  TempRoot root("emit");
  emit_tables({row("a", RunOutcome::Solved, 3)}, root.path.string());
  CHECK(fs::exists(root.path / "summary.csv"));
  CHECK(fs::exists(root.path / "tables.txt"));
  CHECK_THROWS(emit_tables({}, root.path.string()));
}
