#include "chronosat/rcll/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace chronosat::rcll {

namespace {

const std::vector<std::pair<std::string, MachineKind>>& standard_machines() {
  static const std::vector<std::pair<std::string, MachineKind>> m = {
      {"bs", MachineKind::Base}, {"cs1", MachineKind::Cap},  {"cs2", MachineKind::Cap},
      {"rs1", MachineKind::Ring}, {"rs2", MachineKind::Ring}, {"ds", MachineKind::Delivery}};
  return m;
}

const char* kind_name(MachineKind k) {
  switch (k) {
    case MachineKind::Base: return "base-station";
    case MachineKind::Cap: return "cap-station";
    case MachineKind::Ring: return "ring-station";
    case MachineKind::Delivery: return "delivery-station";
  }
  return "?";
}

MachineKind parse_kind(const std::string& s) {
  for (auto k : {MachineKind::Base, MachineKind::Cap, MachineKind::Ring, MachineKind::Delivery}) {
    if (s == kind_name(k)) return k;
  }
  throw InstanceError("unknown machine kind '" + s + "'");
}

const std::set<std::string> kBaseColors = {"red", "black", "silver"};
const std::set<std::string> kRingColors = {"blue", "green", "orange", "yellow"};
const std::set<std::string> kCapColors = {"black", "grey"};

std::string join(const std::vector<std::string>& xs) {
  if (xs.empty()) return "-";
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (s == "-") return out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) out.push_back(item);
  return out;
}

std::string pddl_number(const Rational& r) {
  std::string s = r.decimal_str();
  if (s.find('/') != std::string::npos) throw InstanceError("value " + s + " has no exact decimal form for PDDL");
  return s;
}

}  // namespace

std::string_view to_string(Complexity c) { return c == Complexity::C0 ? "C0" : "C1"; }
std::string_view to_string(Granularity g) { return g == Granularity::Fine ? "fine" : "macro"; }

Complexity parse_complexity(const std::string& text) {
  if (text == "C0" || text == "c0") return Complexity::C0;
  if (text == "C1" || text == "c1") return Complexity::C1;
  throw InstanceError("unknown complexity '" + text + "'");
}

RcllInstance RcllInstance::standard(int robots) {
  RcllInstance inst;
  inst.robot_count = robots;
  for (const auto& [name, kind] : standard_machines()) inst.machines.push_back({name, kind, Rational(0), Rational(0)});
  return inst;
}

std::vector<std::string> RcllInstance::positions() const {
  std::vector<std::string> out{"start"};
  for (const auto& m : machines) out.push_back(m.name);
  return out;
}

Rational RcllInstance::travel_time(const std::string& a, const std::string& b) const {
  if (a == b) return Rational(0);
  auto it = travel.find({a, b});
  if (it == travel.end()) throw InstanceError("no travel time between " + a + " and " + b);
  return it->second;
}

void RcllInstance::set_travel(const std::string& a, const std::string& b, const Rational& t) {
  travel[{a, b}] = t;
  travel[{b, a}] = t;
}

Rational RcllInstance::duration(const std::string& kind) const {
  auto it = durations.find(kind);
  if (it == durations.end()) throw InstanceError("no duration for " + kind);
  return it->second;
}

std::string RcllInstance::cap_station(const Order& o) const { return o.cap_color == "grey" ? "cs1" : "cs2"; }

std::string RcllInstance::ring_station(const Order& o) const {
  const std::string& c = o.ring_colors.at(0);
  return c == "blue" || c == "green" ? "rs1" : "rs2";
}

void RcllInstance::check() const {
  if (robot_count < 1 || robot_count > 3) throw InstanceError("robot count must be 1..3");
  if (machines.size() != standard_machines().size()) throw InstanceError("expected exactly six machines");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    if (machines[i].name != standard_machines()[i].first || machines[i].kind != standard_machines()[i].second) {
      throw InstanceError("machine " + std::to_string(i) + " must be " + standard_machines()[i].first);
    }
  }
  auto pos = positions();
  for (const auto& a : pos) {
    for (const auto& b : pos) {
      if (a == b) continue;
      Rational t = travel_time(a, b);
      if (t < Rational(0)) throw InstanceError("negative travel time " + a + " " + b);
      if (t != travel_time(b, a)) throw InstanceError("asymmetric travel time " + a + " " + b);
    }
  }
  for (const auto& k : operation_kinds()) {
    if (duration(k) <= Rational(0)) throw InstanceError("duration of " + k + " must be positive");
  }
  std::set<std::string> ids;
  for (const auto& o : orders) {
    if (!ids.insert(o.id).second) throw InstanceError("duplicate order " + o.id);
    if (o.open > o.close) throw InstanceError("order " + o.id + " window opens after it closes");
    if (o.open < Rational(0)) throw InstanceError("order " + o.id + " window opens before 0");
    std::size_t rings = o.complexity == Complexity::C0 ? 0 : 1;
    if (o.ring_colors.size() != rings || o.ring_payment.size() != rings) {
      throw InstanceError("order " + o.id + " ring count does not match its complexity");
    }
    if (!kBaseColors.count(o.base_color)) throw InstanceError("bad base color " + o.base_color);
    if (!kCapColors.count(o.cap_color)) throw InstanceError("bad cap color " + o.cap_color);
    for (const auto& c : o.ring_colors) {
      if (!kRingColors.count(c)) throw InstanceError("bad ring color " + c);
    }
    for (int p : o.ring_payment) {
      if (p < 0 || p > 2) throw InstanceError("ring payment must be 0..2");
    }
  }
}

std::string write_instance(const RcllInstance& inst) {
  std::ostringstream os;
  os << "name " << inst.name << "\n";
  os << "robots " << inst.robot_count << "\n";
  for (const auto& m : inst.machines) os << "machine " << m.name << " " << kind_name(m.kind) << " " << m.x.str() << " " << m.y.str() << "\n";
  auto pos = inst.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      os << "travel " << pos[i] << " " << pos[j] << " " << inst.travel_time(pos[i], pos[j]).str() << "\n";
    }
  }
  for (const auto& k : operation_kinds()) {
    auto it = inst.durations.find(k);
    if (it != inst.durations.end()) os << "duration " << k << " " << it->second.str() << "\n";
  }
  for (const auto& o : inst.orders) {
    std::vector<std::string> pay;
    for (int p : o.ring_payment) pay.push_back(std::to_string(p));
    os << "order " << o.id << " " << to_string(o.complexity) << " base " << o.base_color << " rings "
       << join(o.ring_colors) << " cap " << o.cap_color << " payment " << join(pay) << " window " << o.open.str()
       << " " << o.close.str() << (o.delivered ? " delivered" : "") << "\n";
  }
  return os.str();
}

RcllInstance read_instance(const std::string& text) {
  RcllInstance inst;
  inst.machines.clear();
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto fail = [&](const std::string& why) -> InstanceError {
      return InstanceError("instance line " + std::to_string(line_no) + ": " + why);
    };
    auto number = [&](const std::string& s) {
      try {
        return Rational::parse(s);
      } catch (const std::exception&) {
        throw fail("bad number '" + s + "'");
      }
    };
    std::vector<std::string> w;
    for (std::string x; ls >> x;) w.push_back(x);
    if (key == "name" && w.size() == 1) {
      inst.name = w[0];
    } else if (key == "robots" && w.size() == 1) {
      inst.robot_count = std::stoi(w[0]);
    } else if (key == "machine" && w.size() == 4) {
      inst.machines.push_back({w[0], parse_kind(w[1]), number(w[2]), number(w[3])});
    } else if (key == "travel" && w.size() == 3) {
      inst.set_travel(w[0], w[1], number(w[2]));
    } else if (key == "duration" && w.size() == 2) {
      inst.durations[w[0]] = number(w[1]);
    } else if (key == "order" && (w.size() == 13 || w.size() == 14)) {
      if (w[2] != "base" || w[4] != "rings" || w[6] != "cap" || w[8] != "payment" || w[10] != "window") {
        throw fail("expected 'order <id> <C0|C1> base <c> rings <cs> cap <c> payment <ps> window <open> <close>'");
      }
      Order o;
      o.id = w[0];
      o.complexity = parse_complexity(w[1]);
      o.base_color = w[3];
      o.ring_colors = split(w[5]);
      o.cap_color = w[7];
      for (const auto& p : split(w[9])) o.ring_payment.push_back(std::stoi(p));
      o.open = number(w[11]);
      o.close = number(w[12]);
      if (w.size() == 14) {
        if (w[13] != "delivered") throw fail("unexpected '" + w[13] + "'");
        o.delivered = true;
      }
      inst.orders.push_back(std::move(o));
    } else {
      throw fail("unrecognised entry '" + key + "'");
    }
  }
  inst.check();
  return inst;
}

RcllInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_instance(ss.str());
}

void save_instance(const RcllInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write instance file '" + path + "'");
  out << write_instance(inst);
}

std::string problem_pddl(const RcllInstance& inst) {
  std::ostringstream os;
  os << "(define (problem " << inst.name << ")\n  (:domain rcll)\n  (:objects";
  for (int r = 1; r <= inst.robot_count; ++r) os << " r" << r;
  os << " - robot";
  for (const auto& o : inst.orders) os << " " << o.id;
  os << " - order n0 n1 n2 - count start - location";
  for (const auto& m : inst.machines) os << " " << m.name << " - " << kind_name(m.kind);
  os << ")\n  (:init\n   ";
  for (int r = 1; r <= inst.robot_count; ++r) os << " (at r" << r << " start) (idle r" << r << ") (empty-handed r" << r << ")";
  os << "\n   ";
  for (const auto& m : inst.machines) {
    os << " (free " << m.name << ")";
    if (m.kind == MachineKind::Cap) os << " (cs-empty " << m.name << ")";
    if (m.kind == MachineKind::Ring) os << " (rs-empty " << m.name << ") (rs-count " << m.name << " n0)";
  }
  os << "\n    (next n0 n1) (next n1 n2)";
  for (int a = 0; a <= 2; ++a) {
    for (int p = 0; p <= a; ++p) os << " (minus n" << a << " n" << p << " n" << a - p << ")";
  }
  std::vector<std::string> tils;
  for (const auto& o : inst.orders) {
    os << "\n   ";
    if (o.delivered) {
      os << " (ringed " << o.id << ") (capped " << o.id << ") (delivered " << o.id << ")";
    } else {
      os << " (pending " << o.id << ")";
      if (o.complexity == Complexity::C0) os << " (ringed " << o.id << ")";
    }
    os << " (cap-of " << o.id << " " << inst.cap_station(o) << ")";
    if (o.complexity == Complexity::C1) {
      os << " (ring-of " << o.id << " " << inst.ring_station(o) << ") (price " << o.id << " n" << o.payment() << ")";
    }
    if (o.open.is_zero()) {
      os << " (deliverable " << o.id << ")";
    } else {
      tils.push_back("(at " + pddl_number(o.open) + " (deliverable " + o.id + "))");
    }
    tils.push_back("(at " + pddl_number(o.close) + " (not (deliverable " + o.id + ")))");
  }
  for (const auto& t : tils) os << "\n    " << t;
  auto pos = inst.positions();
  os << "\n   ";
  for (const auto& a : pos) {
    for (const auto& b : pos) os << " (= (travel " << a << " " << b << ") " << pddl_number(inst.travel_time(a, b)) << ")";
  }
  os << "\n   ";
  for (const auto& k : operation_kinds()) os << " (= (op-" << k << ") " << pddl_number(inst.duration(k)) << ")";
  os << ")\n  (:goal (and";
  for (const auto& o : inst.orders) os << " (delivered " << o.id << ")";
  os << ")))\n";
  return os.str();
}

int upper_bound_steps(const RcllInstance& inst, Granularity g) {
  int total = 0;
  for (const auto& o : inst.orders) {
    int pay = o.payment();
    if (g == Granularity::Fine) {
      total += o.complexity == Complexity::C0 ? 7 : 7 + 3 + 2 * pay;
    } else {
      total += o.complexity == Complexity::C0 ? 3 : 4 + (pay > 0 ? 1 : 0);
    }
  }
  return total;
}

}  // namespace chronosat::rcll
