#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "chronosat/smt/term.hpp"

namespace chronosat::smt {

struct SolverConfig {
  std::string command = "z3";
  std::vector<std::string> args = {"-in"};
  /// Wall-clock budget per query in seconds; unset means unlimited.
  std::optional<double> timeout_s;
  /// Directory for per-session transcripts; empty disables logging.
  std::string log_dir;
  /// Solver accepts push/pop. When false, minimize restarts the solver for
  /// every refinement.
  bool incremental = true;
};

enum class Verdict { Sat, Unsat, Unknown };

std::string_view to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  Model model;              // populated on Sat
  std::string diagnostics;  // reason-unknown or similar
};

struct SessionStats {
  std::uint64_t check_sat_calls = 0;
  double wall_seconds = 0;
};

/// One external solver process spoken to over stdin/stdout in SMT-LIB 2.6.
/// After a Timeout or SolverCrashed error the session is dead and must be
/// replaced.
class SolverSession {
 public:
  explicit SolverSession(SolverConfig config);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  /// Absolute deadline shared by subsequent queries (global planning budget).
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

  /// Sends set-logic, declarations and assertions of `f`.
  void load(const Formula& f);
  void assert_term(const Term& t);
  void push();
  void pop();
  int depth() const { return depth_; }
  bool incremental() const { return config_.incremental; }

  /// check-sat; on sat fetches values of every declaration of the loaded
  /// formula.
  CheckResult check_sat();

  const SessionStats& stats() const { return stats_; }
  bool alive() const { return pid_ > 0; }
  const std::string& transcript() const { return transcript_; }

 private:
  void start();
  void stop();
  void send(const std::string& text);
  std::string read_reply();
  [[noreturn]] void crash(const std::string& why);

  SolverConfig config_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;  // bytes read but not yet consumed
  std::string transcript_;
  std::ofstream log_;
  int depth_ = 0;
  std::vector<std::pair<std::string, Sort>> declared_;
  const Formula* loaded_ = nullptr;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  SessionStats stats_;
};

/// Loads `f` into a fresh context of `session` and decides it.
CheckResult check(SolverSession& session, const Formula& f);

struct MinimizeOptions {
  /// true: refine with `objective < mu`; false: with `objective <= mu - step`.
  bool strict_step = true;
  Rational step = Rational(1);
  std::uint64_t iteration_cap = 10000;
};

enum class MinimizeStatus { Optimal, Infeasible, Unknown };

struct MinimizeResult {
  MinimizeStatus status = MinimizeStatus::Unknown;
  Model model;                  // best model found (Optimal, or best-so-far on Unknown)
  std::optional<Rational> value;
  std::uint64_t iterations = 0;
  std::string diagnostics;
};

/// Linear search: check, then repeatedly require a strictly better objective
/// until the solver reports unsat.
MinimizeResult minimize(SolverSession& session, const Formula& f, const Term& objective,
                        const MinimizeOptions& options = {});

/// Parses a `(get-value ...)` reply into name/value pairs.
std::vector<std::pair<std::string, Value>> parse_get_value(const std::string& reply);

/// Parses a solver constant such as `3`, `(- 3)`, `2.5` or `(/ 1.0 8.0)`.
Rational parse_numeral(const std::string& text);

}  // namespace chronosat::smt
