#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/rational.hpp"

namespace chronosat::rcll {

enum class Complexity { C0, C1 };
enum class Granularity { Fine, Macro };
enum class MachineKind { Base, Cap, Ring, Delivery };

std::string_view to_string(Complexity c);
std::string_view to_string(Granularity g);
Complexity parse_complexity(const std::string& text);

struct Machine {
  std::string name;
  MachineKind kind = MachineKind::Base;
  Rational x, y;  // field position, informational
};

struct Order {
  std::string id;
  Complexity complexity = Complexity::C0;
  std::string base_color;
  std::vector<std::string> ring_colors;
  std::string cap_color;
  std::vector<int> ring_payment;  // extra bases per ring
  Rational open, close;
  bool delivered = false;  // test fixtures only

  int payment() const { return ring_payment.empty() ? 0 : ring_payment.front(); }
};

/// Primitive operations with a machine-side duration.
inline const std::vector<std::string>& operation_kinds() {
  static const std::vector<std::string> kinds = {
      "get-base",    "fetch-cap-carrier", "feed-cap-carrier", "discard-waste",   "feed-product", "feed-ring",
      "feed-payment", "mount-ring",       "retrieve-output",  "mount-cap",       "deliver"};
  return kinds;
}

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One team's production floor. Positions are `start` followed by the
/// machines bs, cs1, cs2, rs1, rs2, ds in this order.
struct RcllInstance {
  std::string name = "rcll";
  int robot_count = 1;
  std::vector<Machine> machines;
  std::map<std::pair<std::string, std::string>, Rational> travel;  // symmetric, both directions stored
  std::vector<Order> orders;
  std::map<std::string, Rational> durations;  // keyed by operation kind

  /// Canonical six machines at the given positions (default all zero).
  static RcllInstance standard(int robots);

  std::vector<std::string> positions() const;
  Rational travel_time(const std::string& a, const std::string& b) const;
  void set_travel(const std::string& a, const std::string& b, const Rational& t);
  Rational duration(const std::string& kind) const;

  std::string cap_station(const Order& o) const;   // cs1 for grey caps, cs2 for black
  std::string ring_station(const Order& o) const;  // rs1 for blue/green, rs2 for orange/yellow

  /// Throws InstanceError on violated invariants.
  void check() const;
};

/// Native key-value instance file; see docs in README.
std::string write_instance(const RcllInstance& inst);
RcllInstance read_instance(const std::string& text);
RcllInstance load_instance(const std::string& path);
void save_instance(const RcllInstance& inst, const std::string& path);

/// Text of the bundled temporal domain (identical to data/rcll/domain.pddl).
const std::string& domain_pddl();
/// PDDL problem for the instance against domain_pddl(). Delivery windows
/// become timed literals on `deliverable`.
std::string problem_pddl(const RcllInstance& inst);

/// Fixed per-order step table summed over orders:
/// fine C0 = 7, fine C1 = 10 + 2 * payment, macro C0 = 3, macro C1 = 4 + (payment > 0).
int upper_bound_steps(const RcllInstance& inst, Granularity g);

}  // namespace chronosat::rcll
