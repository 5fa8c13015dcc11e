#pragma once

#include <cstdint>
#include <string>

#include "chronosat/rcll/instance.hpp"

namespace chronosat::bench {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then
/// two xor-shift-multiply rounds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [lo, hi] by rejection sampling.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

/// Sum of the macro durations of the one-robot macro plan for `inst`, with
/// the robot starting at the start zone.
Rational macro_plan_duration(const rcll::RcllInstance& inst);

/// One-order instance drawn from `seed`: integer machine positions, travel
/// times uniform in [5, 40], operation durations uniform in [5, 30], colors
/// uniform over the palettes, C1 ring payment uniform over {0, 1, 2} and
/// the delivery window [0, 4 * macro_plan_duration].
rcll::RcllInstance generate_instance(std::uint64_t seed, rcll::Complexity complexity, int robots);

/// Instance id used in file names, e.g. `c1-r2-000017`.
std::string instance_id(rcll::Complexity complexity, int robots, int index);

/// Per-instance seed for index `index` of a cell.
std::uint64_t cell_seed(std::uint64_t suite_seed, rcll::Complexity complexity, int robots, int index);

}  // namespace chronosat::bench
