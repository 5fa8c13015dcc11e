#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/pddl/model.hpp"
#include "chronosat/plan/plan.hpp"

namespace chronosat::plan {

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  /// Maximum number of steps per action schema; absent schemas are unused.
  std::map<std::string, int> occurrences;
  /// Every start and end lies on the grid {0, grid, 2 grid, ...} up to horizon.
  Rational horizon = Rational(10);
  Rational grid = Rational(1);
  std::size_t max_grid_points = 21;
  std::size_t max_candidates = 4000;
  std::uint64_t max_nodes = 20'000'000;
  /// Keep enumerating after the first valid plan.
  bool collect_all = false;
};

struct OracleResult {
  bool sat = false;
  std::vector<Plan> plans;  // the first valid plan, or all of them with collect_all
  std::uint64_t nodes = 0;
};

/// Exhaustive search over grid-timed ground plans, each checked with
/// validate(). Steps are enumerated in canonical order so every multiset of
/// steps is visited once; a prefix is abandoned when it already contains a
/// violation that no later step can repair.
OracleResult brute_force_oracle(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                                const OracleLimits& limits, const Rational& epsilon);

}  // namespace chronosat::plan
