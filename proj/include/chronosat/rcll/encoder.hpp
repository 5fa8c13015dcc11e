#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/plan/plan.hpp"
#include "chronosat/rcll/instance.hpp"
#include "chronosat/smt/term.hpp"

namespace chronosat::rcll {

class InvalidBound : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PrimKind {
  Move,
  GetBase,
  GetSpareBase,
  FetchCapCarrier,
  FeedCapCarrier,
  DiscardWaste,
  FeedProduct,
  FeedRing,
  FeedPayment,
  MountRing,
  RetrieveOutput,
  MountCap,
  Deliver,
};

std::string_view to_string(PrimKind k);

/// Position indices: 0 start, 1 bs, 2 cs1, 3 cs2, 4 rs1, 5 rs2, 6 ds.
constexpr int kStart = 0, kBs = 1, kCs1 = 2, kRs1 = 4, kDs = 6, kPositions = 7;

struct Primitive {
  PrimKind kind = PrimKind::Move;
  int robot = -1;   // -1 for machine-only operations
  int target = -1;  // position index of the machine (or move destination)
  int order = -1;
};

/// One value of the step action selector: a primitive (fine) or a fixed
/// primitive sequence run back to back by one robot (macro). Index 0 is the
/// zero-duration no-op.
struct GroundAction {
  std::string name;
  std::vector<Primitive> prims;
};

std::vector<GroundAction> action_alphabet(const RcllInstance& inst, Granularity g);

/// Duration of a ground action for a robot starting at `from`: primitive
/// durations plus epsilon between consecutive primitives.
Rational action_duration(const RcllInstance& inst, const GroundAction& a, int from, const Rational& epsilon);

struct PrimRecord {
  Primitive prim;
  smt::Term start;
  smt::Term duration;
  smt::Term from;   // robot position before the primitive
  smt::Term count;  // ring station payment counter before the primitive
};

struct RcllEncoding {
  smt::Formula formula;
  Granularity granularity = Granularity::Macro;
  int steps = 0;
  Rational epsilon;
  std::vector<GroundAction> actions;
  std::vector<smt::Term> selector;  // A_i, i < steps
  std::vector<smt::Term> start;     // step start, i < steps
  std::vector<smt::Term> clock;     // running makespan, i <= steps
  std::vector<smt::Term> done;      // every order delivered in x_i, i <= steps
  std::vector<smt::Term> delivery;  // final delivery timestamp per order
  std::vector<std::vector<std::vector<PrimRecord>>> records;  // [step][action]
};

/// Bounded formula I(x0) and T(x_i, x_i+1) for i < p and F(x_i) for some i.
/// Steps start in nondecreasing order; each primitive waits for its robot and
/// machine, which become ready epsilon after their previous use ends. With
/// symmetry breaking, robot k+1 may only act once robot k has left the start.
RcllEncoding encode_feasible(const RcllInstance& inst, int p, Granularity g,
                             const Rational& epsilon = Rational(1, 1000), bool symmetry_breaking = true);

/// Adds c_i = clock_{i+1} - clock_i while some order is undelivered in x_i
/// (else 0) and returns sum(c_i) + sum of delivery timestamps.
smt::Term encode_cost(RcllEncoding& enc);

/// The same objective as a plain expression over the step variables.
smt::Term cost_expression(const RcllEncoding& enc);

/// Primitive plan over the bundled domain; macros are expanded.
plan::Plan decode_rcll(const smt::Model& model, const RcllEncoding& enc, const RcllInstance& inst);

}  // namespace chronosat::rcll
