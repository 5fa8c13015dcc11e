#include "chronosat/plan/oracle.hpp"

#include <algorithm>

#include "chronosat/pddl/types.hpp"
#include "chronosat/plan/validate.hpp"

namespace chronosat::plan {

using namespace pddl;

namespace {

struct Candidate {
  PlanStep step;
  int schema;
};

void bindings(const ObjectTable& objects, const std::vector<TypedName>& params, std::size_t i,
              std::vector<std::string>& cur, std::vector<std::vector<std::string>>& out) {
  if (i == params.size()) {
    out.push_back(cur);
    return;
  }
  for (int id : objects.of_type(params[i].type)) {
    cur.push_back(objects.name(id));
    bindings(objects, params, i + 1, cur, out);
    cur.pop_back();
  }
}

bool prunable(const ValidationReport& r, const Rational& last_start) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
    return v.kind == Violation::Kind::Permanent || (v.kind == Violation::Kind::Condition && v.time < last_start);
  });
}

class Search {
 public:
  Search(const DomainModel& d, const ProblemModel& p, const OracleLimits& l, const Rational& eps)
      : domain_(d), problem_(p), limits_(l), eps_(eps) {}

  OracleResult run() {
    if (limits_.grid <= Rational(0) || limits_.horizon < Rational(0)) {
      throw std::invalid_argument("oracle grid must be positive and horizon nonnegative");
    }
    Rational points = limits_.horizon / limits_.grid;
    if (!points.is_integer() || static_cast<std::size_t>(points.num()) + 1 > limits_.max_grid_points) {
      throw SearchSpaceTooLarge("time grid has more than " + std::to_string(limits_.max_grid_points) + " points");
    }
    build_candidates();
    Plan empty;
    ++result_.nodes;
    auto report = validate(empty, domain_, problem_, eps_);
    if (report.valid) {
      result_.sat = true;
      result_.plans.push_back(empty);
      if (!limits_.collect_all) return std::move(result_);
    }
    dfs(0);
    return std::move(result_);
  }

 private:
  void build_candidates() {
    ObjectTable objects(domain_, problem_);
    StaticValues values = static_values(problem_);
    std::vector<Rational> grid;
    for (Rational t(0); t <= limits_.horizon; t += limits_.grid) grid.push_back(t);

    auto add_schema = [&](const std::string& name, const std::vector<TypedName>& params,
                          const std::vector<DurationBound>* duration) {
      auto occ = limits_.occurrences.find(name);
      if (occ == limits_.occurrences.end() || occ->second <= 0) return;
      int schema = static_cast<int>(caps_.size());
      caps_.push_back(occ->second);
      std::vector<std::vector<std::string>> all;
      std::vector<std::string> cur;
      bindings(objects, params, 0, cur, all);
      for (const auto& args : all) {
        std::map<std::string, std::string> binding;
        for (std::size_t i = 0; i < params.size(); ++i) binding[params[i].name] = args[i];
        std::vector<Rational> durations;
        if (!duration) {
          durations.push_back(Rational(0));
        } else {
          bool defined = true;
          std::optional<Rational> lo, hi, fixed;
          for (const auto& b : *duration) {
            auto v = evaluate_numeric(b.expr, binding, values);
            if (!v) {
              defined = false;
              break;
            }
            if (b.op == CompareOp::Eq) fixed = *v;
            if (b.op == CompareOp::Ge || b.op == CompareOp::Gt) lo = lo ? max(*lo, *v) : *v;
            if (b.op == CompareOp::Le || b.op == CompareOp::Lt) hi = hi ? min(*hi, *v) : *v;
          }
          if (!defined) continue;
          if (fixed) {
            durations.push_back(*fixed);
          } else {
            for (const auto& d : grid) {
              if ((!lo || d >= *lo) && (!hi || d <= *hi)) durations.push_back(d);
            }
          }
        }
        for (const auto& s : grid) {
          for (const auto& d : durations) {
            if (d < Rational(0) || s + d > limits_.horizon) continue;
            Candidate c{PlanStep{s, name, args, d}, schema};
            Plan solo;
            solo.steps.push_back(c.step);
            auto r = validate(solo, domain_, problem_, eps_);
            if (prunable(r, Rational(-1))) continue;
            candidates_.push_back(std::move(c));
          }
        }
      }
    };
    for (const auto& a : domain_.actions) add_schema(a.name, a.params, nullptr);
    for (const auto& a : domain_.durative_actions) add_schema(a.name, a.params, &a.duration);
    if (candidates_.size() > limits_.max_candidates) {
      throw SearchSpaceTooLarge("oracle alphabet has " + std::to_string(candidates_.size()) + " timed ground steps");
    }
    std::stable_sort(candidates_.begin(), candidates_.end(),
                     [](const Candidate& a, const Candidate& b) { return step_less(a.step, b.step); });
    used_.assign(caps_.size(), 0);
  }

  bool dfs(std::size_t from) {
    for (std::size_t i = from; i < candidates_.size(); ++i) {
      const Candidate& c = candidates_[i];
      if (used_[static_cast<std::size_t>(c.schema)] >= caps_[static_cast<std::size_t>(c.schema)]) continue;
      if (++result_.nodes > limits_.max_nodes) throw SearchSpaceTooLarge("oracle node budget exhausted");
      prefix_.steps.push_back(c.step);
      ++used_[static_cast<std::size_t>(c.schema)];
      auto report = validate(prefix_, domain_, problem_, eps_);
      bool stop = false;
      if (report.valid) {
        result_.sat = true;
        result_.plans.push_back(prefix_);
        stop = !limits_.collect_all;
      }
      if (!stop && !prunable(report, c.step.start)) stop = dfs(i + 1);
      --used_[static_cast<std::size_t>(c.schema)];
      prefix_.steps.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const DomainModel& domain_;
  const ProblemModel& problem_;
  const OracleLimits& limits_;
  Rational eps_;
  std::vector<Candidate> candidates_;
  std::vector<int> caps_;
  std::vector<int> used_;
  Plan prefix_;
  OracleResult result_;
};

}  // namespace

OracleResult brute_force_oracle(const DomainModel& domain, const ProblemModel& problem, const OracleLimits& limits,
                                const Rational& epsilon) {
  return Search(domain, problem, limits, epsilon).run();
}

}  // namespace chronosat::plan
