#include "chronosat/bench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chronosat/bench/generator.hpp"
#include "chronosat/bench/process.hpp"
#include "chronosat/pddl/parser.hpp"
#include "chronosat/plan/validate.hpp"

namespace chronosat::bench {

namespace fs = std::filesystem;
using rcll::Complexity;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
      }
      row.clear();
      field.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

std::string tail(const std::string& text, std::size_t n) { return text.size() <= n ? text : text.substr(text.size() - n); }

struct Job {
  const PlannerSpec* planner;
  Cell cell;
  std::string instance;
  fs::path dir;
};

struct Gate {
  pddl::DomainModel domain = pddl::parse_domain_text(rcll::domain_pddl());
};

BenchRow run_job(const BenchConfig& cfg, const Job& job, const Gate& gate) {
  BenchRow row;
  row.planner = job.planner->label;
  row.complexity = job.cell.first;
  row.robots = job.cell.second;
  row.instance = job.instance;
  auto inst = rcll::load_instance((job.dir / "instance.rcll").string());
  auto problem = pddl::parse_problem_text(rcll::problem_pddl(inst), gate.domain);
  fs::path plan_path = job.dir / (job.planner->label + ".plan");
  fs::remove(plan_path);
  Rational eps(1, 1000);
  std::optional<plan::Plan> found;

  if (job.planner->config) {
    auto pc = *job.planner->config;
    eps = pc.epsilon;
    pc.timeout_s = cfg.timeout_s;
    pc.dump_smt.clear();
    if (job.planner->occurrences_from_instance) pc.occurrences = pipeline::rcll_occurrences(inst);
    auto begin = std::chrono::steady_clock::now();
    try {
      auto r = pipeline::solve_rcll(inst, pc);
      switch (r.outcome) {
        case pipeline::Outcome::Plan:
          row.outcome = RunOutcome::Solved;
          row.cost = r.cost;
          found = r.plan;
          break;
        case pipeline::Outcome::NoPlan: row.outcome = RunOutcome::NoPlan; break;
        case pipeline::Outcome::Timeout: row.outcome = RunOutcome::Timeout; break;
        case pipeline::Outcome::Unknown: row.outcome = RunOutcome::Unknown; break;
      }
      if (row.outcome != RunOutcome::Solved) row.diagnostics = r.diagnostics;
    } catch (const std::exception& e) {
      row.outcome = RunOutcome::Error;
      row.diagnostics = e.what();
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  } else {
    std::string cmd = job.planner->command;
    cmd = replace_all(cmd, "{domain}", shell_quote((fs::path(cfg.suite_dir()) / "domain.pddl").string()));
    cmd = replace_all(cmd, "{problem}", shell_quote((job.dir / "problem.pddl").string()));
    cmd = replace_all(cmd, "{instance}", shell_quote((job.dir / "instance.rcll").string()));
    cmd = replace_all(cmd, "{plan}", shell_quote(plan_path.string()));
    cmd = replace_all(cmd, "{timeout}", fixed3(cfg.timeout_s));
    fs::path log = job.dir / (job.planner->label + ".log");
    fs::remove(log);
    auto pr = run_shell(cmd, cfg.timeout_s + cfg.grace_s, log.string());
    row.runtime_s = pr.seconds;
    if (pr.timed_out || pr.exit_code == 20) {
      row.outcome = RunOutcome::Timeout;
    } else if (pr.exit_code == 10) {
      row.outcome = RunOutcome::NoPlan;
    } else if (pr.exit_code == 30) {
      row.outcome = RunOutcome::Unknown;
    } else if (pr.exit_code == 0 && fs::exists(plan_path)) {
      try {
        found = plan::load_plan(plan_path.string());
        row.outcome = RunOutcome::Solved;
      } catch (const std::exception& e) {
        row.outcome = RunOutcome::Error;
        row.diagnostics = e.what();
      }
    } else {
      row.outcome = RunOutcome::Error;
      row.diagnostics = "exit " + std::to_string(pr.exit_code) + ": " + tail(read_file(log), 400);
    }
  }

  if (found) {
    std::string rejected;
    try {
      auto report = plan::validate(*found, gate.domain, problem, eps);
      if (!report.valid) rejected = report.first_violation ? report.first_violation->description : "unknown";
    } catch (const std::exception& e) {
      rejected = e.what();
    }
    if (!rejected.empty()) {
      row.outcome = RunOutcome::Error;
      row.cost.reset();
      row.diagnostics = "plan failed validation: " + rejected;
    } else if (row.runtime_s > cfg.timeout_s) {
      row.outcome = RunOutcome::Timeout;
      row.cost.reset();
      row.diagnostics = "plan found after the timeout";
    } else {
      plan::save_plan(*found, plan_path.string());
      row.plan_path = plan_path.string();
    }
  }
  return row;
}

}  // namespace

std::vector<PlannerSpec> standard_planners(const smt::SolverConfig& solver, const Rational& epsilon) {
  using pipeline::Engine;
  using pipeline::Objective;
  auto make = [&](std::string label, Engine e, Objective o, bool configured) {
    pipeline::PlannerConfig c;
    c.engine = e;
    c.objective = o;
    c.solver = solver;
    c.epsilon = epsilon;
    return PlannerSpec{std::move(label), c, "", configured};
  };
  return {make("rcll-macro", Engine::RcllMacro, Objective::Feasible, false),
          make("rcll-macro-opt", Engine::RcllMacro, Objective::Optimal, false),
          make("rcll-fine", Engine::RcllFine, Objective::Feasible, false),
          make("rcll-fine-opt", Engine::RcllFine, Objective::Optimal, false),
          make("lifted", Engine::Lifted, Objective::Feasible, false),
          make("lifted-conf", Engine::Lifted, Objective::Feasible, true)};
}

void BenchConfig::check() const {
  if (instances_per_cell < 1) throw pipeline::ConfigError("instances per cell must be at least 1");
  if (workers < 1) throw pipeline::ConfigError("workers must be at least 1");
  if (timeout_s <= 0) throw pipeline::ConfigError("timeout must be positive");
  if (planners.empty()) throw pipeline::ConfigError("no planners configured");
  std::set<std::string> labels;
  for (const auto& p : planners) {
    if (p.label.empty() || p.label.find_first_of(",/ \"") != std::string::npos) {
      throw pipeline::ConfigError("bad planner label '" + p.label + "'");
    }
    if (!labels.insert(p.label).second) throw pipeline::ConfigError("duplicate planner label " + p.label);
    if (!p.config && p.command.empty()) throw pipeline::ConfigError("planner " + p.label + " has nothing to run");
  }
  for (const auto& [c, r] : cells()) {
    if (r < 1 || r > 3) throw pipeline::ConfigError("robot count must be 1..3");
  }
}

std::vector<Cell> BenchConfig::cells() const {
  if (!grid.empty()) return grid;
  std::vector<Cell> out;
  for (auto c : {Complexity::C0, Complexity::C1}) {
    for (int r = 1; r <= 3; ++r) out.push_back({c, r});
  }
  return out;
}

std::string BenchConfig::suite_dir() const { return (fs::path(root) / suite).string(); }

std::string_view to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::Solved: return "solved";
    case RunOutcome::NoPlan: return "no_plan";
    case RunOutcome::Timeout: return "timeout";
    case RunOutcome::Unknown: return "unknown";
    case RunOutcome::Error: return "error";
  }
  return "?";
}

RunOutcome parse_outcome(const std::string& text) {
  for (auto o : {RunOutcome::Solved, RunOutcome::NoPlan, RunOutcome::Timeout, RunOutcome::Unknown, RunOutcome::Error}) {
    if (text == to_string(o)) return o;
  }
  throw std::runtime_error("unknown outcome '" + text + "'");
}

std::string cell_name(const Cell& c) {
  return std::string(c.first == Complexity::C0 ? "c0" : "c1") + "-r" + std::to_string(c.second);
}

std::vector<std::string> materialize(const BenchConfig& config) {
  fs::path suite = config.suite_dir();
  fs::create_directories(suite);
  write_file(suite / "domain.pddl", rcll::domain_pddl());
  std::vector<std::string> dirs;
  for (const auto& cell : config.cells()) {
    for (int i = 1; i <= config.instances_per_cell; ++i) {
      auto inst = generate_instance(cell_seed(config.seed, cell.first, cell.second, i), cell.first, cell.second);
      inst.name = instance_id(cell.first, cell.second, i);
      fs::path dir = suite / cell_name(cell) / inst.name;
      fs::create_directories(dir);
      write_file(dir / "instance.rcll", write_instance(inst));
      write_file(dir / "problem.pddl", rcll::problem_pddl(inst));
      dirs.push_back(dir.string());
    }
  }
  return dirs;
}

std::string csv_header() { return "planner,complexity,robots,instance,outcome,runtime_s,cost,plan_path,diagnostics"; }

std::string csv_row(const BenchRow& r) {
  std::ostringstream os;
  os << csv_field(r.planner) << ',' << rcll::to_string(r.complexity) << ',' << r.robots << ',' << csv_field(r.instance)
     << ',' << to_string(r.outcome) << ',' << fixed3(r.runtime_s) << ',' << (r.cost ? r.cost->str() : "") << ','
     << csv_field(r.plan_path) << ',' << csv_field(r.diagnostics);
  return os.str();
}

std::vector<BenchRow> read_runs(const std::string& path) {
  std::vector<BenchRow> out;
  if (!fs::exists(path)) return out;
  auto rows = parse_csv(read_file(path));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 9) throw std::runtime_error(path + ": malformed row " + std::to_string(i + 1));
    BenchRow r;
    r.planner = f[0];
    r.complexity = rcll::parse_complexity(f[1]);
    r.robots = std::stoi(f[2]);
    r.instance = f[3];
    r.outcome = parse_outcome(f[4]);
    r.runtime_s = std::stod(f[5]);
    if (!f[6].empty()) r.cost = Rational::parse(f[6]);
    r.plan_path = f[7];
    r.diagnostics = f[8];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BenchRow> run_suite(const BenchConfig& config) {
  config.check();
  fs::path suite = config.suite_dir();
  fs::create_directories(suite);

  nlohmann::json manifest;
  manifest["seed"] = config.seed;
  manifest["instances_per_cell"] = config.instances_per_cell;
  for (const auto& c : config.cells()) manifest["grid"].push_back(cell_name(c));
  fs::path manifest_path = suite / "suite.json";
  if (fs::exists(manifest_path)) {
    auto old = nlohmann::json::parse(read_file(manifest_path));
    if (old["seed"] != manifest["seed"] || old["grid"] != manifest["grid"] ||
        old["instances_per_cell"] != manifest["instances_per_cell"]) {
      throw pipeline::ConfigError("suite " + config.suite + " exists with a different seed or grid");
    }
  }
  manifest["timeout_s"] = config.timeout_s;
  for (const auto& p : config.planners) {
    nlohmann::json entry{{"label", p.label}};
    if (p.config) {
      entry["engine"] = std::string(pipeline::to_string(p.config->engine));
      entry["objective"] = std::string(pipeline::to_string(p.config->objective));
      entry["configured_occurrences"] = p.occurrences_from_instance;
    } else {
      entry["command"] = p.command;
    }
    manifest["planners"].push_back(entry);
  }
  write_file(manifest_path, manifest.dump(2) + "\n");

  auto dirs = materialize(config);
  fs::path runs_path = suite / "runs.csv";
  auto existing = read_runs(runs_path.string());
  std::set<std::pair<std::string, std::string>> done;
  for (const auto& r : existing) done.insert({r.planner, r.instance});
  if (!fs::exists(runs_path)) write_file(runs_path, csv_header() + "\n");

  std::vector<Job> jobs;
  std::size_t d = 0;
  for (const auto& cell : config.cells()) {
    for (int i = 1; i <= config.instances_per_cell; ++i, ++d) {
      std::string id = instance_id(cell.first, cell.second, i);
      for (const auto& p : config.planners) {
        if (!done.count({p.label, id})) jobs.push_back({&p, cell, id, dirs[d]});
      }
    }
  }

  Gate gate;
  std::mutex sink;
  std::ofstream runs(runs_path, std::ios::app | std::ios::binary);
  std::vector<std::optional<BenchRow>> fresh(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j; (j = next++) < jobs.size();) {
      BenchRow row;
      try {
        row = run_job(config, jobs[j], gate);
      } catch (const std::exception& e) {
        row.planner = jobs[j].planner->label;
        row.complexity = jobs[j].cell.first;
        row.robots = jobs[j].cell.second;
        row.instance = jobs[j].instance;
        row.outcome = RunOutcome::Error;
        row.diagnostics = e.what();
      }
      std::lock_guard<std::mutex> lock(sink);
      runs << csv_row(row) << '\n';
      runs.flush();
      fresh[j] = std::move(row);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < config.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto& r : fresh) existing.push_back(std::move(*r));
  return existing;
}

std::vector<CellSummary> summarize(const std::vector<BenchRow>& rows) {
  std::vector<CellSummary> out;
  std::map<std::tuple<std::string, Complexity, int>, std::size_t> index;
  std::vector<double> runtime;
  std::vector<Rational> cost;
  std::vector<int> costed;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.planner, r.complexity, r.robots);
    auto [it, fresh] = index.emplace(key, out.size());
    if (fresh) {
      CellSummary c;
      c.planner = r.planner;
      c.complexity = r.complexity;
      c.robots = r.robots;
      out.push_back(c);
      runtime.push_back(0);
      cost.push_back(Rational(0));
      costed.push_back(0);
    }
    std::size_t i = it->second;
    ++out[i].attempted;
    if (r.outcome != RunOutcome::Solved) continue;
    ++out[i].solved;
    runtime[i] += r.runtime_s;
    if (r.cost) {
      cost[i] = cost[i] + *r.cost;
      ++costed[i];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].solved > 0) out[i].mean_runtime_s = runtime[i] / out[i].solved;
    if (costed[i] > 0) out[i].mean_cost = cost[i] / Rational(costed[i]);
  }
  return out;
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream os;
  os << "planner,complexity,robots,solved,attempted,mean_runtime_s,mean_cost\n";
  for (const auto& c : cells) {
    os << csv_field(c.planner) << ',' << rcll::to_string(c.complexity) << ',' << c.robots << ',' << c.solved << ','
       << c.attempted << ',' << (c.mean_runtime_s ? fixed3(*c.mean_runtime_s) : "--") << ','
       << (c.mean_cost ? fixed3(c.mean_cost->to_double()) : "--") << '\n';
  }
  return os.str();
}

std::string summary_table(const std::vector<CellSummary>& cells) {
  std::ostringstream os;
  for (auto cx : {Complexity::C0, Complexity::C1}) {
    std::vector<std::string> planners;
    std::map<std::pair<std::string, int>, const CellSummary*> at;
    for (const auto& c : cells) {
      if (c.complexity != cx) continue;
      if (std::find(planners.begin(), planners.end(), c.planner) == planners.end()) planners.push_back(c.planner);
      at[{c.planner, c.robots}] = &c;
    }
    if (planners.empty()) continue;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s", std::string(rcll::to_string(cx)).c_str());
    os << line;
    for (int r = 1; r <= 3; ++r) {
      std::snprintf(line, sizeof line, "  %-16s", ("R" + std::to_string(r) + " solved  time").c_str());
      os << line;
    }
    os << '\n';
    for (const auto& p : planners) {
      std::snprintf(line, sizeof line, "%-16s", p.c_str());
      os << line;
      for (int r = 1; r <= 3; ++r) {
        auto it = at.find({p, r});
        std::string cell = "";
        if (it != at.end()) {
          const auto& c = *it->second;
          cell = std::to_string(c.solved) + "/" + std::to_string(c.attempted) + "  " +
                 (c.mean_runtime_s ? fixed3(*c.mean_runtime_s) : "--");
        }
        std::snprintf(line, sizeof line, "  %-16s", cell.c_str());
        os << line;
      }
      os << '\n';
    }
    os << '\n';
  }
  return os.str();
}

void emit_tables(const std::vector<BenchRow>& rows, const std::string& dir) {
  if (rows.empty()) throw std::invalid_argument("no results to tabulate");
  auto cells = summarize(rows);
  fs::create_directories(dir);
  write_file(fs::path(dir) / "summary.csv", summary_csv(cells));
  write_file(fs::path(dir) / "tables.txt", summary_table(cells));
}

}  // namespace chronosat::bench
