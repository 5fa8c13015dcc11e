#include "chronosat/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

#include "chronosat/chronicle/chronicle.hpp"
#include "chronosat/pddl/parser.hpp"
#include "chronosat/rcll/encoder.hpp"

namespace chronosat::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
  Clock::time_point begin = Clock::now();
  std::optional<Clock::time_point> deadline;

  explicit Budget(const std::optional<double>& timeout_s) {
    if (timeout_s) deadline = begin + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*timeout_s));
  }
  bool expired() const { return deadline && Clock::now() >= *deadline; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - begin).count(); }
};

void dump(const PlannerConfig& config, const smt::Formula& f) {
  if (config.dump_smt.empty()) return;
  std::ofstream out(config.dump_smt, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + config.dump_smt);
  out << smt::emit_smtlib(f) << "(check-sat)\n";
}

/// Outcome of one bounded round.
struct Round {
  smt::Verdict verdict = smt::Verdict::Unknown;
  bool timed_out = false;
  smt::Model model;
  std::optional<Rational> cost;
  std::string diagnostics;
};

Round run_round(const PlannerConfig& config, const Budget& budget, const smt::Formula& f,
                const std::optional<smt::Term>& objective) {
  Round r;
  try {
    smt::SolverSession session(config.solver);
    session.set_deadline(budget.deadline);
    if (objective) {
      auto m = smt::minimize(session, f, *objective);
      r.diagnostics = m.diagnostics;
      if (m.status == smt::MinimizeStatus::Optimal) {
        r.verdict = smt::Verdict::Sat;
        r.model = m.model;
        r.cost = m.value;
      } else if (m.status == smt::MinimizeStatus::Infeasible) {
        r.verdict = smt::Verdict::Unsat;
      } else {
        r.timed_out = budget.expired();
      }
    } else {
      auto c = smt::check(session, f);
      r.verdict = c.verdict;
      r.model = c.model;
      r.diagnostics = c.diagnostics;
    }
  } catch (const smt::SmtError& e) {
    if (e.kind() != smt::SmtErrorKind::Timeout) throw;
    r.timed_out = true;
    r.diagnostics = e.what();
  }
  return r;
}

void collect_literals(const pddl::Formula& f, bool positive, std::set<std::pair<std::string, bool>>& out) {
  using K = pddl::Formula::Kind;
  switch (f.kind) {
    case K::And:
    case K::Or:
      for (const auto& c : f.children) collect_literals(c, positive, out);
      break;
    case K::Not:
      collect_literals(f.children.at(0), !positive, out);
      break;
    case K::Atom:
      out.insert({f.atom.predicate, positive});
      break;
    default:
      break;
  }
}

int goal_literals(const pddl::ProblemModel& problem) {
  if (problem.goal.kind == pddl::Formula::Kind::And) return std::max<int>(1, problem.goal.children.size());
  return 1;
}

struct LiftedContext {
  const pddl::DomainModel& domain;
  const pddl::ProblemModel& problem;
  chronicle::IdAllocator ids;
  chronicle::DomainTranslation dt;
  chronicle::ProblemTranslation pt;

  LiftedContext(const pddl::DomainModel& d, const pddl::ProblemModel& p, const Rational& eps) : domain(d), problem(p) {
    dt = chronicle::translate_domain(domain, eps, ids);
    pt = chronicle::translate_problem(domain, problem, dt, ids);
  }

  std::pair<lifted::BoundedProblem, lifted::EncodingArtifact> encode(const lifted::OccurrenceMap& occ,
                                                                     const PlannerConfig& config) const {
    chronicle::IdAllocator local = ids;
    auto bp = lifted::build_bounded(dt, pt, occ, local);
    if (config.horizon) bp.horizon = config.horizon;
    auto art = lifted::encode(bp, {config.symmetry_breaking});
    return {std::move(bp), std::move(art)};
  }
};

smt::Term makespan(const lifted::EncodingArtifact& art) {
  smt::Term out = smt::Term::real(Rational(0));
  for (const auto& h : art.hints) out = smt::max(out, smt::ite(h.presence, h.end, smt::Term::real(Rational(0))));
  return out;
}

std::vector<lifted::OccurrenceMap> lifted_schedule(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                                                   const PlannerConfig& config) {
  if (config.occurrences) return {*config.occurrences};
  auto relevant = relevant_actions(domain, problem);
  int cap = config.max_per_action * goal_literals(problem);
  std::vector<lifted::OccurrenceMap> rounds;
  for (int k = 1; k <= cap && !relevant.empty(); ++k) rounds.push_back(deepening_round(relevant, k));
  if (rounds.empty()) rounds.push_back({});
  return rounds;
}

std::vector<int> rcll_schedule(const rcll::RcllInstance& inst, const PlannerConfig& config, rcll::Granularity g) {
  if (config.steps) return {*config.steps};
  std::vector<int> out;
  int ub = std::max(1, rcll::upper_bound_steps(inst, g));
  for (int p = std::max(1, config.initial_steps); p <= ub; ++p) out.push_back(p);
  return out;
}

rcll::Granularity granularity(Engine e) {
  return e == Engine::RcllFine ? rcll::Granularity::Fine : rcll::Granularity::Macro;
}

}  // namespace

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Lifted: return "lifted";
    case Engine::RcllFine: return "rcll-fine";
    case Engine::RcllMacro: return "rcll-macro";
  }
  return "?";
}

std::string_view to_string(Objective o) { return o == Objective::Feasible ? "feasible" : "optimal"; }

Engine parse_engine(const std::string& text) {
  for (auto e : {Engine::Lifted, Engine::RcllFine, Engine::RcllMacro}) {
    if (text == to_string(e)) return e;
  }
  throw ConfigError("unknown engine '" + text + "'");
}

Objective parse_objective(const std::string& text) {
  if (text == "feasible") return Objective::Feasible;
  if (text == "optimal") return Objective::Optimal;
  throw ConfigError("unknown objective '" + text + "'");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Plan: return "plan";
    case Outcome::NoPlan: return "no_plan_within_bounds";
    case Outcome::Timeout: return "timeout";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Plan: return 0;
    case Outcome::NoPlan: return 10;
    case Outcome::Timeout: return 20;
    case Outcome::Unknown: return 30;
  }
  return 1;
}

void ensure_valid(const plan::Plan& plan, const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                  const Rational& epsilon) {
  auto report = plan::validate(plan, domain, problem, epsilon);
  if (!report.valid) {
    std::string why = report.first_violation ? report.first_violation->description : "unknown violation";
    throw InternalSoundnessError("decoded plan failed validation: " + why + "\n" + plan::render_plan(plan), report);
  }
}

std::vector<std::string> relevant_actions(const pddl::DomainModel& domain, const pddl::ProblemModel& problem) {
  std::set<std::pair<std::string, bool>> wanted;
  collect_literals(problem.goal, true, wanted);
  for (const auto& a : domain.actions) collect_literals(a.precondition, true, wanted);
  for (const auto& a : domain.durative_actions) {
    for (const auto& c : a.conditions) collect_literals(c.condition, true, wanted);
  }
  auto supports = [&](const pddl::Effect& e) { return wanted.count({e.atom.predicate, e.positive}) > 0; };
  std::vector<std::string> out;
  for (const auto& a : domain.actions) {
    if (std::any_of(a.effects.begin(), a.effects.end(), supports)) out.push_back(a.name);
  }
  for (const auto& a : domain.durative_actions) {
    if (std::any_of(a.effects.begin(), a.effects.end(), [&](const auto& e) { return supports(e.effect); })) {
      out.push_back(a.name);
    }
  }
  return out;
}

lifted::OccurrenceMap deepening_round(const std::vector<std::string>& relevant, int round) {
  lifted::OccurrenceMap out;
  for (const auto& a : relevant) out.push_back({a, round});
  return out;
}

lifted::OccurrenceMap rcll_occurrences(const rcll::RcllInstance& inst) {
  std::map<std::string, int> n;
  for (const auto& o : inst.orders) {
    if (o.delivered) continue;
    for (const char* k : {"get-base", "fetch-cap-carrier", "feed-cap-carrier", "discard-waste", "feed-product",
                          "mount-cap", "deliver"}) {
      ++n[k];
    }
    if (o.complexity == rcll::Complexity::C1) {
      for (const char* k : {"feed-ring", "mount-ring", "retrieve-output"}) ++n[k];
      n["get-spare-base"] += o.payment();
      n["feed-payment"] += o.payment();
    }
  }
  lifted::OccurrenceMap out;
  auto domain = pddl::parse_domain_text(rcll::domain_pddl());
  for (const auto& a : domain.durative_actions) {
    auto it = n.find(a.name);
    if (it != n.end() && it->second > 0) out.push_back({a.name, it->second});
  }
  return out;
}

SolveResult solve_pddl(const pddl::DomainModel& domain, const pddl::ProblemModel& problem, const PlannerConfig& config) {
  if (config.engine != Engine::Lifted) throw ConfigError("PDDL input needs the lifted engine");
  if (config.steps) throw ConfigError("--steps applies to the RCLL engines");
  Budget budget(config.timeout_s);
  SolveResult result;
  LiftedContext ctx(domain, problem, config.epsilon);
  for (const auto& occ : lifted_schedule(domain, problem, config)) {
    if (budget.expired()) {
      result.outcome = Outcome::Timeout;
      break;
    }
    ++result.rounds;
    result.bound = lifted::format_occurrences(occ);
    auto [bp, art] = ctx.encode(occ, config);
    dump(config, art.formula);
    std::optional<smt::Term> objective;
    if (config.objective == Objective::Optimal) objective = makespan(art);
    Round r = run_round(config, budget, art.formula, objective);
    result.diagnostics = r.diagnostics;
    if (r.timed_out) {
      result.outcome = Outcome::Timeout;
      break;
    }
    if (r.verdict == smt::Verdict::Unknown) {
      result.outcome = Outcome::Unknown;
      break;
    }
    if (r.verdict == smt::Verdict::Unsat) {
      result.outcome = Outcome::NoPlan;
      continue;
    }
    result.plan = lifted::decode(r.model, art, bp);
    ensure_valid(result.plan, domain, problem, config.epsilon);
    result.cost = r.cost ? *r.cost : result.plan.makespan();
    result.outcome = Outcome::Plan;
    break;
  }
  result.seconds = budget.elapsed();
  return result;
}

SolveResult solve_rcll(const rcll::RcllInstance& inst, const PlannerConfig& config) {
  if (config.engine == Engine::Lifted) {
    if (config.steps) throw ConfigError("--steps applies to the RCLL engines");
    auto domain = pddl::parse_domain_text(rcll::domain_pddl());
    auto problem = pddl::parse_problem_text(rcll::problem_pddl(inst), domain);
    return solve_pddl(domain, problem, config);
  }
  if (config.occurrences) throw ConfigError("--occurrences applies to the lifted engine");
  auto g = granularity(config.engine);
  Budget budget(config.timeout_s);
  SolveResult result;
  auto domain = pddl::parse_domain_text(rcll::domain_pddl());
  auto problem = pddl::parse_problem_text(rcll::problem_pddl(inst), domain);
  for (int p : rcll_schedule(inst, config, g)) {
    if (budget.expired()) {
      result.outcome = Outcome::Timeout;
      break;
    }
    ++result.rounds;
    result.bound = std::to_string(p);
    auto enc = rcll::encode_feasible(inst, p, g, config.epsilon, config.symmetry_breaking);
    std::optional<smt::Term> objective;
    if (config.objective == Objective::Optimal) objective = rcll::encode_cost(enc);
    dump(config, enc.formula);
    Round r = run_round(config, budget, enc.formula, objective);
    result.diagnostics = r.diagnostics;
    if (r.timed_out) {
      result.outcome = Outcome::Timeout;
      break;
    }
    if (r.verdict == smt::Verdict::Unknown) {
      result.outcome = Outcome::Unknown;
      break;
    }
    if (r.verdict == smt::Verdict::Unsat) {
      result.outcome = Outcome::NoPlan;
      continue;
    }
    result.plan = rcll::decode_rcll(r.model, enc, inst);
    ensure_valid(result.plan, domain, problem, config.epsilon);
    result.cost = r.cost ? *r.cost : smt::evaluate(rcll::cost_expression(enc), r.model).number;
    result.outcome = Outcome::Plan;
    break;
  }
  result.seconds = budget.elapsed();
  return result;
}

smt::Formula encode_pddl(const pddl::DomainModel& domain, const pddl::ProblemModel& problem,
                         const PlannerConfig& config) {
  if (config.engine != Engine::Lifted) throw ConfigError("PDDL input needs the lifted engine");
  LiftedContext ctx(domain, problem, config.epsilon);
  auto [bp, art] = ctx.encode(lifted_schedule(domain, problem, config).front(), config);
  return art.formula;
}

smt::Formula encode_rcll(const rcll::RcllInstance& inst, const PlannerConfig& config) {
  if (config.engine == Engine::Lifted) {
    auto domain = pddl::parse_domain_text(rcll::domain_pddl());
    auto problem = pddl::parse_problem_text(rcll::problem_pddl(inst), domain);
    return encode_pddl(domain, problem, config);
  }
  auto g = granularity(config.engine);
  auto enc = rcll::encode_feasible(inst, rcll_schedule(inst, config, g).front(), g, config.epsilon,
                                   config.symmetry_breaking);
  if (config.objective == Objective::Optimal) encode_cost(enc);
  return enc.formula;
}

}  // namespace chronosat::pipeline
