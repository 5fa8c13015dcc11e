#include "chronosat/bench/generator.hpp"

#include <array>
#include <cstdio>

#include "chronosat/rcll/encoder.hpp"

namespace chronosat::bench {

using rcll::Complexity;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

Rational macro_plan_duration(const rcll::RcllInstance& inst) {
  rcll::RcllInstance one = inst;
  one.robot_count = 1;
  auto actions = rcll::action_alphabet(one, rcll::Granularity::Macro);
  Rational total;
  int loc = rcll::kStart;
  for (std::size_t a = 1; a < actions.size(); ++a) {
    total = total + rcll::action_duration(one, actions[a], loc, Rational(0));
    for (const auto& p : actions[a].prims) {
      if (p.robot >= 0) loc = p.target;
    }
  }
  return total;
}

rcll::RcllInstance generate_instance(std::uint64_t seed, Complexity complexity, int robots) {
  static const std::array<const char*, 3> base = {"red", "black", "silver"};
  static const std::array<const char*, 4> ring = {"blue", "green", "orange", "yellow"};
  static const std::array<const char*, 2> cap = {"black", "grey"};
  SplitMix64 rng(seed);
  auto inst = rcll::RcllInstance::standard(robots);
  inst.name = "rcll-" + std::to_string(seed);
  for (auto& m : inst.machines) {
    m.x = Rational(rng.uniform(0, 14));
    m.y = Rational(rng.uniform(0, 8));
  }
  auto pos = inst.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) inst.set_travel(pos[i], pos[j], Rational(rng.uniform(5, 40)));
  }
  for (const auto& k : rcll::operation_kinds()) inst.durations[k] = Rational(rng.uniform(5, 30));
  rcll::Order o;
  o.id = "o1";
  o.complexity = complexity;
  o.base_color = base[rng.uniform(0, 2)];
  if (complexity == Complexity::C1) {
    o.ring_colors.push_back(ring[rng.uniform(0, 3)]);
    o.ring_payment.push_back(static_cast<int>(rng.uniform(0, 2)));
  }
  o.cap_color = cap[rng.uniform(0, 1)];
  o.open = Rational(0);
  inst.orders.push_back(o);
  inst.orders[0].close = Rational(4) * macro_plan_duration(inst);
  inst.check();
  return inst;
}

std::string instance_id(Complexity complexity, int robots, int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-r%d-%06d", complexity == Complexity::C0 ? "c0" : "c1", robots, index);
  return buf;
}

std::uint64_t cell_seed(std::uint64_t suite_seed, Complexity complexity, int robots, int index) {
  SplitMix64 mix(suite_seed ^ (static_cast<std::uint64_t>(complexity == Complexity::C0 ? 0 : 1) << 40) ^
                 (static_cast<std::uint64_t>(robots) << 32) ^ static_cast<std::uint64_t>(index));
  return mix.next();
}

}  // namespace chronosat::bench
