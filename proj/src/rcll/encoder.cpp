#include "chronosat/rcll/encoder.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace chronosat::rcll {

using smt::Sort;
using smt::Term;

namespace {

// Integer state codes.
// hold: 0 empty, 1 spare base, 2+k carrier of cap station k, 4+o workpiece o.
// cs phase: 0 empty, 1 waste, 2 ready, 3+o loaded with o.
// rs: 0 empty, 1+o loaded, 1+O+o done.
// prog: 0 pending, 1 based, 2 ringed, 3 capped, 4 delivered.
constexpr int kDelivered = 4;

int position_index(const RcllInstance& inst, const std::string& name) {
  auto pos = inst.positions();
  auto it = std::find(pos.begin(), pos.end(), name);
  if (it == pos.end()) throw InstanceError("unknown position " + name);
  return static_cast<int>(it - pos.begin());
}

int cap_pos(const RcllInstance& inst, const Order& o) { return position_index(inst, inst.cap_station(o)); }
int ring_pos(const RcllInstance& inst, const Order& o) { return position_index(inst, inst.ring_station(o)); }

std::string op_kind(PrimKind k) {
  switch (k) {
    case PrimKind::GetSpareBase: return "get-base";
    case PrimKind::Move: return "";
    default: return std::string(to_string(k));
  }
}

Rational travel(const RcllInstance& inst, int a, int b) {
  auto pos = inst.positions();
  return inst.travel_time(pos.at(a), pos.at(b));
}

Rational prim_duration(const RcllInstance& inst, const Primitive& p, int from) {
  if (p.kind == PrimKind::Move) return travel(inst, from, p.target);
  if (p.kind == PrimKind::MountRing) return inst.duration("mount-ring");
  return travel(inst, from, p.target) + inst.duration(op_kind(p.kind));
}

struct Layout {
  int robots = 0, orders = 0;
  int loc(int r) const { return r; }
  int hold(int r) const { return robots + r; }
  int rr(int r) const { return 2 * robots + r; }
  int cs(int k) const { return 3 * robots + k; }
  int rs(int k) const { return 3 * robots + 2 + k; }
  int rsc(int k) const { return 3 * robots + 4 + k; }
  int mr(int pos) const { return 3 * robots + 6 + (pos - 1); }
  int prog(int o) const { return 3 * robots + 12 + o; }
  int dt(int o) const { return 3 * robots + 12 + orders + o; }
  int size() const { return 3 * robots + 12 + 2 * orders; }

  std::string name(int v) const {
    auto idx = [](const char* p, int i) { return std::string(p) + std::to_string(i); };
    if (v < robots) return idx("loc", v + 1);
    if (v < 2 * robots) return idx("hold", v - robots + 1);
    if (v < 3 * robots) return idx("rr", v - 2 * robots + 1);
    int w = v - 3 * robots;
    if (w < 2) return idx("cs", w + 1);
    if (w < 4) return idx("rs", w - 1);
    if (w < 6) return idx("rsc", w - 3);
    if (w < 12) return idx("mr", w - 5);
    w -= 12;
    if (w < orders) return idx("prog", w + 1);
    return idx("dt", w - orders + 1);
  }
  Sort sort(int v) const {
    int w = v - 3 * robots;
    if (v >= 2 * robots && v < 3 * robots) return Sort::Real;
    if (w >= 6 && w < 12) return Sort::Real;
    if (w >= 12 + orders) return Sort::Real;
    return Sort::Int;
  }
};

Term num(int v) { return Term::integer(Rational(v)); }
Term real(const Rational& v) { return Term::real(v); }

bool is_const(const Term& t) { return t.op() == smt::Op::Number; }

/// travel(from, target) for a symbolic position.
Term travel_term(const RcllInstance& inst, const Term& from, int target) {
  if (is_const(from)) return real(travel(inst, static_cast<int>(from.value().num()), target));
  Term out = real(travel(inst, kPositions - 1, target));
  for (int p = kPositions - 2; p >= 0; --p) out = smt::ite(smt::eq(from, num(p)), real(travel(inst, p, target)), out);
  return out;
}

Term max_term(const Term& a, const Term& b) {
  if (is_const(a) && is_const(b)) return real(std::max(a.value(), b.value()));
  return smt::max(a, b);
}

struct Exec {
  std::vector<Term> guard;
  std::map<int, Term> updates;  // state slot -> value in x_{i+1}
  std::vector<PrimRecord> records;
  std::vector<Term> lower;  // bounds on the step start
  Term end;                 // end of the last primitive
};

/// Symbolic run of one ground action from state x starting at `s`.
Exec execute(const RcllInstance& inst, const Layout& L, const GroundAction& a, const std::vector<Term>& x,
             const Term& s, const Rational& eps) {
  Exec ex;
  std::vector<Term> w = x;
  auto set = [&](int slot, Term v) {
    w[slot] = v;
    ex.updates[slot] = v;
  };
  const int O = L.orders;
  Term prev_end;
  Term offset = real(Rational(0));
  std::set<int> robots_seen, machines_seen;
  for (const auto& p : a.prims) {
    Term st = s + offset;
    Term from = p.robot >= 0 ? w[L.loc(p.robot)] : num(kStart);
    Term dur;
    if (p.kind == PrimKind::MountRing) {
      dur = real(inst.duration("mount-ring"));
    } else if (p.kind == PrimKind::Move) {
      dur = travel_term(inst, from, p.target);
    } else {
      dur = travel_term(inst, from, p.target) + real(inst.duration(op_kind(p.kind)));
    }
    Term end = st + dur;
    PrimRecord rec{p, st, dur, from, num(0)};
    if (p.robot >= 0 && robots_seen.insert(p.robot).second) ex.lower.push_back(x[L.rr(p.robot)] - offset);
    if (p.kind != PrimKind::Move && machines_seen.insert(p.target).second) ex.lower.push_back(x[L.mr(p.target)] - offset);
    if (p.kind == PrimKind::Deliver && !inst.orders[p.order].open.is_zero()) {
      ex.lower.push_back(real(inst.orders[p.order].open + eps) - offset - dur);
    }
    if (p.robot >= 0) ex.guard.push_back(st >= w[L.rr(p.robot)]);
    if (p.kind != PrimKind::Move) ex.guard.push_back(st >= w[L.mr(p.target)]);

    const int r = p.robot, o = p.order;
    auto hold = [&]() { return w[L.hold(r)]; };
    auto is = [&](int slot, int v) { return smt::eq(w[slot], num(v)); };
    switch (p.kind) {
      case PrimKind::Move:
        ex.guard.push_back(!smt::eq(from, num(p.target)));
        ex.guard.push_back(dur > real(Rational(0)));
        break;
      case PrimKind::GetBase:
        ex.guard.push_back(smt::eq(hold(), num(0)));
        ex.guard.push_back(is(L.prog(o), 0));
        set(L.hold(r), num(4 + o));
        set(L.prog(o), num(inst.orders[o].complexity == Complexity::C0 ? 2 : 1));
        break;
      case PrimKind::GetSpareBase:
        ex.guard.push_back(smt::eq(hold(), num(0)));
        set(L.hold(r), num(1));
        break;
      case PrimKind::FetchCapCarrier: {
        int k = p.target - kCs1;
        ex.guard.push_back(smt::eq(hold(), num(0)));
        ex.guard.push_back(is(L.cs(k), 0));
        set(L.hold(r), num(2 + k));
        break;
      }
      case PrimKind::FeedCapCarrier: {
        int k = p.target - kCs1;
        ex.guard.push_back(smt::eq(hold(), num(2 + k)));
        ex.guard.push_back(is(L.cs(k), 0));
        set(L.hold(r), num(0));
        set(L.cs(k), num(1));
        break;
      }
      case PrimKind::DiscardWaste: {
        int k = p.target - kCs1;
        ex.guard.push_back(smt::eq(hold(), num(0)));
        ex.guard.push_back(is(L.cs(k), 1));
        set(L.cs(k), num(2));
        break;
      }
      case PrimKind::FeedProduct: {
        int k = p.target - kCs1;
        ex.guard.push_back(smt::eq(hold(), num(4 + o)));
        ex.guard.push_back(is(L.cs(k), 2));
        ex.guard.push_back(is(L.prog(o), 2));
        set(L.hold(r), num(0));
        set(L.cs(k), num(3 + o));
        break;
      }
      case PrimKind::FeedRing: {
        int k = p.target - kRs1;
        ex.guard.push_back(smt::eq(hold(), num(4 + o)));
        ex.guard.push_back(is(L.rs(k), 0));
        ex.guard.push_back(is(L.prog(o), 1));
        set(L.hold(r), num(0));
        set(L.rs(k), num(1 + o));
        break;
      }
      case PrimKind::FeedPayment: {
        int k = p.target - kRs1;
        rec.count = w[L.rsc(k)];
        ex.guard.push_back(smt::eq(hold(), num(1)));
        ex.guard.push_back(w[L.rsc(k)] <= num(1));
        set(L.hold(r), num(0));
        set(L.rsc(k), w[L.rsc(k)] + num(1));
        break;
      }
      case PrimKind::MountRing: {
        int k = p.target - kRs1;
        int price = inst.orders[o].payment();
        rec.count = w[L.rsc(k)];
        ex.guard.push_back(is(L.rs(k), 1 + o));
        ex.guard.push_back(w[L.rsc(k)] >= num(price));
        set(L.rs(k), num(1 + O + o));
        set(L.rsc(k), w[L.rsc(k)] - num(price));
        set(L.prog(o), num(2));
        break;
      }
      case PrimKind::RetrieveOutput: {
        int k = p.target - kRs1;
        ex.guard.push_back(smt::eq(hold(), num(0)));
        ex.guard.push_back(is(L.rs(k), 1 + O + o));
        set(L.hold(r), num(4 + o));
        set(L.rs(k), num(0));
        break;
      }
      case PrimKind::MountCap: {
        int k = p.target - kCs1;
        ex.guard.push_back(smt::eq(hold(), num(0)));
        ex.guard.push_back(is(L.cs(k), 3 + o));
        set(L.hold(r), num(4 + o));
        set(L.cs(k), num(0));
        set(L.prog(o), num(3));
        break;
      }
      case PrimKind::Deliver:
        ex.guard.push_back(smt::eq(hold(), num(4 + o)));
        ex.guard.push_back(is(L.prog(o), 3));
        set(L.hold(r), num(0));
        set(L.prog(o), num(kDelivered));
        set(L.dt(o), end);
        break;
    }
    if (r >= 0) {
      set(L.loc(r), num(p.target));
      set(L.rr(r), end + real(eps));
    }
    if (p.kind != PrimKind::Move) set(L.mr(p.target), end + real(eps));
    ex.records.push_back(rec);
    prev_end = end;
    offset = offset + dur + real(eps);
  }
  ex.end = prev_end;
  return ex;
}

std::string robot_name(int r) { return "r" + std::to_string(r + 1); }
std::string count_name(const Rational& n) { return "n" + n.str(); }

}  // namespace

std::string_view to_string(PrimKind k) {
  switch (k) {
    case PrimKind::Move: return "move";
    case PrimKind::GetBase: return "get-base";
    case PrimKind::GetSpareBase: return "get-spare-base";
    case PrimKind::FetchCapCarrier: return "fetch-cap-carrier";
    case PrimKind::FeedCapCarrier: return "feed-cap-carrier";
    case PrimKind::DiscardWaste: return "discard-waste";
    case PrimKind::FeedProduct: return "feed-product";
    case PrimKind::FeedRing: return "feed-ring";
    case PrimKind::FeedPayment: return "feed-payment";
    case PrimKind::MountRing: return "mount-ring";
    case PrimKind::RetrieveOutput: return "retrieve-output";
    case PrimKind::MountCap: return "mount-cap";
    case PrimKind::Deliver: return "deliver";
  }
  return "?";
}

std::vector<GroundAction> action_alphabet(const RcllInstance& inst, Granularity g) {
  std::vector<GroundAction> out{{"noop", {}}};
  auto pos = inst.positions();
  std::set<int> caps, rings, paid_rings;
  for (const auto& o : inst.orders) {
    if (o.delivered) continue;
    caps.insert(cap_pos(inst, o));
    if (o.complexity == Complexity::C1) {
      rings.insert(ring_pos(inst, o));
      if (o.payment() > 0) paid_rings.insert(ring_pos(inst, o));
    }
  }
  auto add = [&](std::string name, std::vector<Primitive> prims) { out.push_back({std::move(name), std::move(prims)}); };
  auto label = [&](const Primitive& p) {
    std::string s(to_string(p.kind));
    if (p.robot >= 0) s += " " + robot_name(p.robot);
    if (p.kind == PrimKind::Move || p.order < 0) s += " " + pos[p.target];
    if (p.order >= 0) s += " " + inst.orders[p.order].id;
    return s;
  };
  const int R = inst.robot_count;
  const int O = static_cast<int>(inst.orders.size());

  if (g == Granularity::Fine) {
    auto prim = [&](Primitive p) { add(label(p), {p}); };
    for (int r = 0; r < R; ++r) {
      for (int l = 1; l < kPositions; ++l) prim({PrimKind::Move, r, l, -1});
    }
    for (int r = 0; r < R; ++r) {
      if (!paid_rings.empty()) prim({PrimKind::GetSpareBase, r, kBs, -1});
      for (int k : caps) {
        prim({PrimKind::FetchCapCarrier, r, k, -1});
        prim({PrimKind::FeedCapCarrier, r, k, -1});
        prim({PrimKind::DiscardWaste, r, k, -1});
      }
      for (int k : paid_rings) prim({PrimKind::FeedPayment, r, k, -1});
      for (int o = 0; o < O; ++o) {
        const Order& ord = inst.orders[o];
        if (ord.delivered) continue;
        prim({PrimKind::GetBase, r, kBs, o});
        prim({PrimKind::FeedProduct, r, cap_pos(inst, ord), o});
        if (ord.complexity == Complexity::C1) {
          prim({PrimKind::FeedRing, r, ring_pos(inst, ord), o});
          prim({PrimKind::RetrieveOutput, r, ring_pos(inst, ord), o});
        }
        prim({PrimKind::MountCap, r, cap_pos(inst, ord), o});
        prim({PrimKind::Deliver, r, kDs, o});
      }
    }
    for (int o = 0; o < O; ++o) {
      const Order& ord = inst.orders[o];
      if (!ord.delivered && ord.complexity == Complexity::C1) prim({PrimKind::MountRing, -1, ring_pos(inst, ord), o});
    }
    return out;
  }

  for (int r = 0; r < R; ++r) {
    std::string rn = robot_name(r);
    for (int k : caps) {
      add("BUFFER-CAP " + rn + " " + pos[k], {{PrimKind::FetchCapCarrier, r, k, -1},
                                               {PrimKind::FeedCapCarrier, r, k, -1},
                                               {PrimKind::DiscardWaste, r, k, -1}});
    }
    for (int o = 0; o < O; ++o) {
      const Order& ord = inst.orders[o];
      if (ord.delivered) continue;
      const std::string& id = ord.id;
      int cs = cap_pos(inst, ord);
      if (ord.complexity == Complexity::C0) {
        add("BASE-TO " + rn + " " + id, {{PrimKind::GetBase, r, kBs, o}, {PrimKind::FeedProduct, r, cs, o}});
      } else {
        int rs = ring_pos(inst, ord);
        add("BASE-TO " + rn + " " + id, {{PrimKind::GetBase, r, kBs, o}, {PrimKind::FeedRing, r, rs, o}});
        if (ord.payment() > 0) {
          std::vector<Primitive> pay;
          for (int i = 0; i < ord.payment(); ++i) {
            pay.push_back({PrimKind::GetSpareBase, r, kBs, -1});
            pay.push_back({PrimKind::FeedPayment, r, rs, -1});
          }
          add("PAY " + rn + " " + id, pay);
        }
        add("MOUNT-RING " + rn + " " + id, {{PrimKind::MountRing, -1, rs, o},
                                             {PrimKind::RetrieveOutput, r, rs, o},
                                             {PrimKind::FeedProduct, r, cs, o}});
      }
      add("CAP-AND-DELIVER " + rn + " " + id, {{PrimKind::MountCap, r, cs, o}, {PrimKind::Deliver, r, kDs, o}});
    }
  }
  return out;
}

Rational action_duration(const RcllInstance& inst, const GroundAction& a, int from, const Rational& epsilon) {
  Rational total;
  int loc = from;
  for (std::size_t i = 0; i < a.prims.size(); ++i) {
    const auto& p = a.prims[i];
    total = total + prim_duration(inst, p, loc);
    if (p.robot >= 0) loc = p.target;
    if (i + 1 < a.prims.size()) total = total + epsilon;
  }
  return total;
}

RcllEncoding encode_feasible(const RcllInstance& inst, int p, Granularity g, const Rational& epsilon,
                             bool symmetry_breaking) {
  if (p < 1) throw InvalidBound("step bound must be at least 1, got " + std::to_string(p));
  inst.check();
  RcllEncoding enc;
  enc.granularity = g;
  enc.steps = p;
  enc.epsilon = epsilon;
  enc.actions = action_alphabet(inst, g);
  Layout L{inst.robot_count, static_cast<int>(inst.orders.size())};
  const int O = L.orders;
  const int N = static_cast<int>(enc.actions.size());
  auto& f = enc.formula;

  auto declare_state = [&](int i) {
    std::vector<Term> x;
    for (int v = 0; v < L.size(); ++v) x.push_back(f.declare(L.name(v) + "_" + std::to_string(i), L.sort(v)));
    auto range = [&](int slot, int hi) { f.add(x[slot] >= num(0) && x[slot] <= num(hi)); };
    for (int r = 0; r < L.robots; ++r) {
      range(L.loc(r), kPositions - 1);
      range(L.hold(r), 3 + O);
    }
    for (int k = 0; k < 2; ++k) {
      range(L.cs(k), 2 + O);
      range(L.rs(k), 2 * O);
      range(L.rsc(k), 2);
    }
    for (int o = 0; o < O; ++o) range(L.prog(o), kDelivered);
    return x;
  };

  std::vector<std::vector<Term>> xs;
  xs.push_back(declare_state(0));
  {
    auto& x = xs[0];
    std::vector<Term> init;
    for (int v = 0; v < L.size(); ++v) {
      if (L.sort(v) == Sort::Real) init.push_back(smt::eq(x[v], real(Rational(0))));
    }
    for (int r = 0; r < L.robots; ++r) {
      init.push_back(smt::eq(x[L.loc(r)], num(kStart)));
      init.push_back(smt::eq(x[L.hold(r)], num(0)));
    }
    for (int k = 0; k < 2; ++k) {
      init.push_back(smt::eq(x[L.cs(k)], num(0)));
      init.push_back(smt::eq(x[L.rs(k)], num(0)));
      init.push_back(smt::eq(x[L.rsc(k)], num(0)));
    }
    for (int o = 0; o < O; ++o) init.push_back(smt::eq(x[L.prog(o)], num(inst.orders[o].delivered ? kDelivered : 0)));
    f.add(smt::conj(init), "init");
  }
  Rational latest;
  for (const auto& o : inst.orders) latest = std::max(latest, o.close);
  enc.clock.push_back(f.declare("t_0", Sort::Real));
  f.add(smt::eq(enc.clock[0], real(Rational(0))));

  enc.records.resize(p);
  for (int i = 0; i < p; ++i) {
    std::string si = std::to_string(i);
    Term A = f.declare("A_" + si, Sort::Int);
    Term s = f.declare("s_" + si, Sort::Real);
    enc.selector.push_back(A);
    enc.start.push_back(s);
    f.add(A >= num(0) && A <= num(N - 1));
    Term prev_s = i == 0 ? real(Rational(0)) : enc.start[i - 1];
    f.add(s >= prev_s && s <= real(latest));
    xs.push_back(declare_state(i + 1));
    const auto& x = xs[i];
    const auto& y = xs[i + 1];
    Term t = enc.clock[i];
    Term t1 = f.declare("t_" + std::to_string(i + 1), Sort::Real);
    enc.clock.push_back(t1);

    std::vector<std::vector<int>> modifiers(L.size());
    enc.records[i].resize(N);
    for (int a = 0; a < N; ++a) {
      Term chosen = smt::eq(A, num(a));
      if (a == 0) {
        f.add(smt::implies(chosen, smt::eq(s, prev_s) && smt::eq(t1, t)));
        continue;
      }
      Exec ex = execute(inst, L, enc.actions[a], x, s, epsilon);
      std::vector<Term> body = ex.guard;
      if (symmetry_breaking) {
        for (const auto& prim : enc.actions[a].prims) {
          if (prim.robot > 0) {
            body.push_back(!smt::eq(x[L.loc(prim.robot - 1)], num(kStart)));
            break;
          }
        }
      }
      for (const auto& [slot, value] : ex.updates) {
        body.push_back(smt::eq(y[slot], value));
        modifiers[slot].push_back(a);
      }
      Term earliest = prev_s;
      for (const auto& lb : ex.lower) earliest = max_term(earliest, lb);
      body.push_back(smt::eq(s, earliest));
      body.push_back(smt::eq(t1, max_term(t, ex.end)));
      f.add(smt::implies(chosen, smt::conj(body)));
      enc.records[i][a] = std::move(ex.records);
    }
    for (int v = 0; v < L.size(); ++v) {
      std::vector<Term> touched;
      for (int a : modifiers[v]) touched.push_back(smt::eq(A, num(a)));
      f.add(smt::implies(!smt::disj(touched), smt::eq(y[v], x[v])));
    }
    if (i > 0) f.add(smt::implies(smt::eq(enc.selector[i - 1], num(0)), smt::eq(A, num(0))));
  }

  std::vector<Term> goal;
  for (int i = 0; i <= p; ++i) {
    const auto& x = xs[i];
    std::vector<Term> done, fin;
    for (int o = 0; o < O; ++o) {
      const Order& ord = inst.orders[o];
      Term delivered = smt::eq(x[L.prog(o)], num(kDelivered));
      done.push_back(delivered);
      fin.push_back(delivered);
      if (ord.delivered) continue;
      Term dt = x[L.dt(o)];
      if (!ord.open.is_zero()) fin.push_back(dt >= real(ord.open + epsilon));
      fin.push_back(dt <= real(ord.close));
    }
    enc.done.push_back(smt::conj(done));
    goal.push_back(smt::conj(fin));
  }
  f.add(smt::disj(goal), "goal");
  for (int o = 0; o < O; ++o) enc.delivery.push_back(xs[p][L.dt(o)]);
  return enc;
}

Term cost_expression(const RcllEncoding& enc) {
  std::vector<Term> parts;
  for (int i = 0; i < enc.steps; ++i) {
    parts.push_back(smt::ite(enc.done[i], real(Rational(0)), enc.clock[i + 1] - enc.clock[i]));
  }
  for (const auto& d : enc.delivery) parts.push_back(d);
  return smt::sum(parts, Sort::Real);
}

Term encode_cost(RcllEncoding& enc) {
  std::vector<Term> parts;
  for (int i = 0; i < enc.steps; ++i) {
    Term c = enc.formula.declare("c_" + std::to_string(i), Sort::Real);
    enc.formula.add(smt::eq(c, smt::ite(enc.done[i], real(Rational(0)), enc.clock[i + 1] - enc.clock[i])));
    parts.push_back(c);
  }
  for (const auto& d : enc.delivery) parts.push_back(d);
  return smt::sum(parts, Sort::Real);
}

plan::Plan decode_rcll(const smt::Model& model, const RcllEncoding& enc, const RcllInstance& inst) {
  auto pos = inst.positions();
  auto number = [&](const Term& t) { return smt::evaluate(t, model).number; };
  auto position = [&](const Term& t) {
    Rational v = number(t);
    if (!v.is_integer() || v < Rational(0) || v >= Rational(kPositions)) {
      throw smt::SmtError(smt::SmtErrorKind::IncompleteModel, "position value " + v.str() + " out of range");
    }
    return pos[static_cast<std::size_t>(v.num())];
  };
  plan::Plan out;
  for (int i = 0; i < enc.steps; ++i) {
    Rational a = number(enc.selector[i]);
    if (!a.is_integer() || a < Rational(0) || a >= Rational(static_cast<std::int64_t>(enc.actions.size()))) {
      throw smt::SmtError(smt::SmtErrorKind::IncompleteModel, "action selector " + a.str() + " out of range");
    }
    for (const auto& rec : enc.records[i][static_cast<std::size_t>(a.num())]) {
      const auto& p = rec.prim;
      plan::PlanStep st;
      st.start = number(rec.start);
      st.duration = number(rec.duration);
      st.action = std::string(to_string(p.kind));
      if (p.robot >= 0) st.args = {robot_name(p.robot), position(rec.from)};
      if (p.kind == PrimKind::Move) {
        st.args.push_back(pos[p.target]);
      } else if (p.kind == PrimKind::MountRing) {
        Rational have = number(rec.count);
        Rational price(inst.orders[p.order].payment());
        st.args = {pos[p.target], inst.orders[p.order].id, count_name(have), count_name(price),
                   count_name(have - price)};
      } else {
        st.args.push_back(pos[p.target]);
        if (p.kind == PrimKind::FeedPayment) {
          Rational have = number(rec.count);
          st.args.push_back(count_name(have));
          st.args.push_back(count_name(have + Rational(1)));
        }
        if (p.order >= 0) st.args.push_back(inst.orders[p.order].id);
      }
      out.steps.push_back(std::move(st));
    }
  }
  out.sort();
  return out;
}

}  // namespace chronosat::rcll
