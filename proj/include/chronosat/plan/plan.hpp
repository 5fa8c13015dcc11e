#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chronosat/rational.hpp"

namespace chronosat::plan {

struct PlanStep {
  Rational start;
  std::string action;
  std::vector<std::string> args;
  Rational duration;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Sort key of a step: start, then action name, then arguments.
bool step_less(const PlanStep& a, const PlanStep& b);

struct Plan {
  std::vector<PlanStep> steps;

  /// Restores the canonical order.
  void sort();
  bool empty() const { return steps.empty(); }
  Rational makespan() const;

  friend bool operator==(const Plan&, const Plan&) = default;
};

class PlanFormatError : public std::runtime_error {
 public:
  PlanFormatError(int line, const std::string& message)
      : std::runtime_error("plan line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// `<start>: (<action> <args...>) [<duration>]`, one line per step.
std::string render_plan(const Plan& plan);

/// Inverse of render_plan. Blank lines and `;` comments are ignored; a
/// missing `[duration]` means an instantaneous step.
Plan parse_plan(std::string_view text);

Plan load_plan(const std::string& path);
void save_plan(const Plan& plan, const std::string& path);

}  // namespace chronosat::plan
