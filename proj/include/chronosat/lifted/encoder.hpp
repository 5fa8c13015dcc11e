#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chronosat/chronicle/chronicle.hpp"
#include "chronosat/plan/plan.hpp"
#include "chronosat/plan/validate.hpp"
#include "chronosat/smt/term.hpp"

namespace chronosat::lifted {

enum class LiftedErrorKind { UnknownAction, HorizonMissing };

class LiftedError : public std::runtime_error {
 public:
  LiftedError(LiftedErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  LiftedErrorKind kind() const { return kind_; }

 private:
  LiftedErrorKind kind_;
};

/// Action name and number of optional instances, in instantiation order.
using OccurrenceMap = std::vector<std::pair<std::string, int>>;

/// Parses `move=3,pick=2`.
OccurrenceMap parse_occurrences(const std::string& text);
std::string format_occurrences(const OccurrenceMap& occ);

struct BoundedProblem {
  chronicle::Chronicle problem;
  std::vector<chronicle::Chronicle> instances;
  OccurrenceMap occurrences;
  /// Upper bound of every timepoint; computed by encode when unset.
  std::optional<Rational> horizon;

  // Problem context shared by every instance.
  std::vector<chronicle::StateFunction> functions;
  pddl::ObjectTable objects;
  plan::StaticValues static_values;
  std::set<std::string> init_atoms;
  Rational max_timed_literal;
  Rational epsilon;
  int horizon_var = -1;
};

BoundedProblem build_bounded(const chronicle::DomainTranslation& domain, const chronicle::ProblemTranslation& problem,
                             const OccurrenceMap& occurrences, chronicle::IdAllocator& ids);

/// Default horizon: latest timed literal plus, per instance, its longest
/// possible duration and one epsilon. Throws HorizonMissing when some
/// duration has no upper bound.
Rational default_horizon(const BoundedProblem& bp);

struct EncodeOptions {
  bool symmetry_breaking = true;
};

struct DecodeHint {
  std::string action;
  smt::Term presence;
  smt::Term start;
  smt::Term end;
  std::vector<smt::Term> params;
};

struct EncodingArtifact {
  smt::Formula formula;
  std::map<int, smt::Term> var_table;  // chronicle variable id -> solver term
  std::vector<DecodeHint> hints;       // one per instance, in order
  Rational horizon;
};

EncodingArtifact encode(const BoundedProblem& bp, const EncodeOptions& options = {});

/// Present instances as plan steps, sorted canonically.
plan::Plan decode(const smt::Model& model, const EncodingArtifact& artifact, const BoundedProblem& bp);

}  // namespace chronosat::lifted
