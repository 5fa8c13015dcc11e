#include "support/rcll_sim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace testing {

using chronosat::Rational;
using namespace chronosat::rcll;

namespace {

enum Hold { Empty, Spare, Carrier1, Carrier2 };

struct World {
  std::vector<int> loc, hold;  // hold >= 10 means workpiece of order hold-10
  std::vector<Rational> robot_ready;
  std::map<int, int> cs;        // position -> 0 empty, 1 waste, 2 ready, 10+o loaded
  std::map<int, int> rs;        // position -> 0 empty, 10+o loaded, 20+o done
  std::map<int, int> payments;  // position -> counter
  std::map<int, Rational> machine_ready;
  std::vector<int> stage;  // 0 pending, 1 base, 2 ready for cap, 3 capped, 4 delivered
  std::vector<Rational> delivered_at;
  Rational last_start, clock;

  std::string key() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < loc.size(); ++r) os << loc[r] << ',' << hold[r] << ',' << robot_ready[r].str() << ';';
    for (const auto& [m, v] : cs) os << 'c' << v;
    for (const auto& [m, v] : rs) os << 'r' << v;
    for (const auto& [m, v] : payments) os << 'p' << v;
    for (const auto& [m, v] : machine_ready) os << 'm' << v.str();
    for (std::size_t o = 0; o < stage.size(); ++o) os << 'o' << stage[o] << ':' << delivered_at[o].str();
    os << 's' << last_start.str() << 't' << clock.str();
    return os.str();
  }
};

Rational travel(const RcllInstance& inst, int a, int b) {
  auto pos = inst.positions();
  return inst.travel_time(pos[a], pos[b]);
}

std::string op_of(PrimKind k) {
  if (k == PrimKind::GetSpareBase) return "get-base";
  return std::string(to_string(k));
}

/// Applies one ground action; false when a guard fails or a window is missed.
bool apply(const RcllInstance& inst, const GroundAction& a, World& w, const Rational& eps) {
  struct Timing {
    Rational offset, duration;
  };
  std::vector<Timing> times;
  Rational offset;
  std::vector<int> where(w.loc);
  for (const auto& p : a.prims) {
    Rational d;
    if (p.kind == PrimKind::MountRing) {
      d = inst.duration("mount-ring");
    } else {
      d = travel(inst, where[p.robot], p.target);
      if (p.kind != PrimKind::Move) d = d + inst.duration(op_of(p.kind));
      where[p.robot] = p.target;
    }
    times.push_back({offset, d});
    offset = offset + d + eps;
  }
  Rational s = w.last_start;
  std::map<int, bool> robot_seen, machine_seen;
  for (std::size_t k = 0; k < a.prims.size(); ++k) {
    const auto& p = a.prims[k];
    if (p.robot >= 0 && !robot_seen[p.robot]) {
      robot_seen[p.robot] = true;
      s = std::max(s, w.robot_ready[p.robot] - times[k].offset);
    }
    if (p.kind != PrimKind::Move && !machine_seen[p.target]) {
      machine_seen[p.target] = true;
      s = std::max(s, w.machine_ready[p.target] - times[k].offset);
    }
    if (p.kind == PrimKind::Deliver && !inst.orders[p.order].open.is_zero()) {
      s = std::max(s, inst.orders[p.order].open + eps - times[k].offset - times[k].duration);
    }
  }

  for (std::size_t k = 0; k < a.prims.size(); ++k) {
    const auto& p = a.prims[k];
    const int o = p.order;
    Rational end = s + times[k].offset + times[k].duration;
    int* hold = p.robot >= 0 ? &w.hold[p.robot] : nullptr;
    switch (p.kind) {
      case PrimKind::Move:
        if (w.loc[p.robot] == p.target || times[k].duration <= Rational(0)) return false;
        break;
      case PrimKind::GetBase:
        if (*hold != Empty || w.stage[o] != 0) return false;
        *hold = 10 + o;
        w.stage[o] = inst.orders[o].complexity == Complexity::C0 ? 2 : 1;
        break;
      case PrimKind::GetSpareBase:
        if (*hold != Empty) return false;
        *hold = Spare;
        break;
      case PrimKind::FetchCapCarrier:
        if (*hold != Empty || w.cs[p.target] != 0) return false;
        *hold = p.target == kCs1 ? Carrier1 : Carrier2;
        break;
      case PrimKind::FeedCapCarrier:
        if (*hold != (p.target == kCs1 ? Carrier1 : Carrier2) || w.cs[p.target] != 0) return false;
        *hold = Empty;
        w.cs[p.target] = 1;
        break;
      case PrimKind::DiscardWaste:
        if (*hold != Empty || w.cs[p.target] != 1) return false;
        w.cs[p.target] = 2;
        break;
      case PrimKind::FeedProduct:
        if (*hold != 10 + o || w.cs[p.target] != 2 || w.stage[o] != 2) return false;
        *hold = Empty;
        w.cs[p.target] = 10 + o;
        break;
      case PrimKind::FeedRing:
        if (*hold != 10 + o || w.rs[p.target] != 0 || w.stage[o] != 1) return false;
        *hold = Empty;
        w.rs[p.target] = 10 + o;
        break;
      case PrimKind::FeedPayment:
        if (*hold != Spare || w.payments[p.target] >= 2) return false;
        *hold = Empty;
        ++w.payments[p.target];
        break;
      case PrimKind::MountRing: {
        int price = inst.orders[o].payment();
        if (w.rs[p.target] != 10 + o || w.payments[p.target] < price) return false;
        w.payments[p.target] -= price;
        w.rs[p.target] = 20 + o;
        w.stage[o] = 2;
        break;
      }
      case PrimKind::RetrieveOutput:
        if (*hold != Empty || w.rs[p.target] != 20 + o) return false;
        *hold = 10 + o;
        w.rs[p.target] = 0;
        break;
      case PrimKind::MountCap:
        if (*hold != Empty || w.cs[p.target] != 10 + o) return false;
        *hold = 10 + o;
        w.cs[p.target] = 0;
        w.stage[o] = 3;
        break;
      case PrimKind::Deliver:
        if (*hold != 10 + o || w.stage[o] != 3) return false;
        if (end > inst.orders[o].close) return false;
        *hold = Empty;
        w.stage[o] = 4;
        w.delivered_at[o] = end;
        break;
    }
    if (p.robot >= 0) {
      w.loc[p.robot] = p.target;
      w.robot_ready[p.robot] = end + eps;
    }
    if (p.kind != PrimKind::Move) w.machine_ready[p.target] = end + eps;
    w.clock = std::max(w.clock, end);
  }
  w.last_start = s;
  return true;
}

bool all_delivered(const World& w) {
  return std::all_of(w.stage.begin(), w.stage.end(), [](int s) { return s == 4; });
}

}  // namespace

RcllOracle simulate_rcll(const RcllInstance& inst, Granularity g, int max_steps, const Rational& epsilon) {
  auto alphabet = action_alphabet(inst, g);
  World init;
  init.loc.assign(inst.robot_count, kStart);
  init.hold.assign(inst.robot_count, Empty);
  init.robot_ready.assign(inst.robot_count, Rational(0));
  for (int m = 1; m < kPositions; ++m) init.machine_ready[m] = Rational(0);
  for (int m : {2, 3}) init.cs[m] = 0;
  for (int m : {4, 5}) init.rs[m] = init.payments[m] = 0;
  for (const auto& o : inst.orders) {
    init.stage.push_back(o.delivered ? 4 : 0);
    init.delivered_at.push_back(Rational(0));
  }

  RcllOracle out;
  out.best_cost.assign(max_steps + 1, std::nullopt);
  std::vector<std::optional<Rational>> exact(max_steps + 1);
  std::map<std::string, int> seen;
  std::function<void(const World&, int)> dfs = [&](const World& w, int depth) {
    auto [it, fresh] = seen.emplace(w.key(), depth);
    if (!fresh) {
      if (it->second <= depth) return;
      it->second = depth;
    }
    ++out.states;
    if (all_delivered(w)) {
      Rational cost = w.clock;
      for (const auto& d : w.delivered_at) cost = cost + d;
      if (!exact[depth] || cost < *exact[depth]) exact[depth] = cost;
      return;
    }
    if (depth == max_steps) return;
    for (std::size_t a = 1; a < alphabet.size(); ++a) {
      World next = w;
      if (apply(inst, alphabet[a], next, epsilon)) dfs(next, depth + 1);
    }
  };
  dfs(init, 0);
  std::optional<Rational> best;
  for (int p = 0; p <= max_steps; ++p) {
    if (exact[p]) {
      if (out.min_steps < 0) out.min_steps = p;
      if (!best || *exact[p] < *best) best = exact[p];
    }
    out.best_cost[p] = best;
  }
  return out;
}

}  // namespace testing
