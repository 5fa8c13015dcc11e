#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>

#include "chronosat/bench/generator.hpp"
#include "chronosat/bench/harness.hpp"
#include "chronosat/pddl/parser.hpp"
#include "chronosat/pipeline/pipeline.hpp"
#include "chronosat/smt/term.hpp"

namespace chronosat::cli {

namespace fs = std::filesystem;
using pipeline::ConfigError;

bool FlagSpec::applies_to(const std::string& command) const {
  return std::find(commands.begin(), commands.end(), command) != commands.end();
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve", "encode", "validate", "generate", "bench"};
  return names;
}

const std::vector<FlagSpec>& flag_table() {
  const std::vector<std::string> all = subcommands();
  const std::vector<std::string> plan = {"solve", "encode"};
  const std::vector<std::string> inputs = {"solve", "encode", "validate"};
  const std::vector<std::string> run = {"solve", "bench"};
  static const std::vector<FlagSpec> table = {
      {"engine", "ENGINE", "lifted, rcll-fine, rcll-macro or auto (lifted for PDDL, rcll-macro for instances)", plan,
       "auto"},
      {"objective", "MODE", "feasible or optimal", plan, "feasible"},
      {"domain", "PATH", "PDDL domain file", inputs, ""},
      {"problem", "PATH", "PDDL problem file", inputs, ""},
      {"instance", "PATH", "RCLL instance file (replaces --domain/--problem)", inputs, ""},
      {"plan", "PATH", "plan file to check", {"validate"}, ""},
      {"occurrences", "MAP", "configured mode: action=count,... (lifted)", plan, ""},
      {"steps", "N", "configured mode: step bound (RCLL engines)", plan, ""},
      {"timeout", "SECONDS", "wall-clock budget per problem (bench default 60)", run, ""},
      {"solver", "CMD", "SMT solver executable", run, "z3"},
      {"solver-arg", "ARG", "solver argument, repeatable (default -in for z3)", run, "", true},
      {"smt-timeout", "SECONDS", "budget per solver query", run, ""},
      {"epsilon", "Q", "separation between interfering events", {"solve", "encode", "validate", "bench"}, "1/1000"},
      {"horizon", "Q", "latest timepoint (lifted)", plan, ""},
      {"no-symmetry", "", "disable symmetry breaking", {"solve", "encode", "bench"}, "false"},
      {"dump-smt", "PATH", "write the SMT-LIB formula here", plan, ""},
      {"log-smt", "DIR", "write solver transcripts into this directory", run, ""},
      {"seed", "N", "generator seed", {"generate", "bench"}, "1"},
      {"complexity", "C", "C0 or C1", {"generate"}, "C0"},
      {"robots", "N", "robot count 1..3", {"generate"}, "1"},
      {"out", "PATH", "solve: plan file; generate: output directory; bench: table directory",
       {"solve", "generate", "bench"}, ""},
      {"root", "DIR", "benchmark root directory", {"bench"}, "bench"},
      {"suite", "NAME", "suite name", {"bench"}, "default"},
      {"grid", "CELLS", "cells such as c0-r1,c1-r3 (empty for all six)", {"bench"}, ""},
      {"instances", "N", "instances per cell", {"bench"}, "20"},
      {"workers", "N", "parallel runs", {"bench"}, "1"},
      {"planners", "LABELS", "built-in planners to run, comma separated, or all", {"bench"}, "all"},
      {"planner-cmd", "LABEL=TEMPLATE", "external planner command, repeatable", {"bench"}, "", true},
      {"config", "PATH", "key=value file; flags override it", all, ""},
      {"print-config", "", "print the effective configuration and exit", all, "false"},
  };
  return table;
}

namespace {

class Settings {
 public:
  explicit Settings(std::string command) : command_(std::move(command)) {}

  const std::string& command() const { return command_; }

  std::string get(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() || it->second.empty() ? "" : it->second.back();
  }
  const std::vector<std::string>& list(const std::string& name) const {
    static const std::vector<std::string> none;
    auto it = values_.find(name);
    return it == values_.end() ? none : it->second;
  }
  bool on(const std::string& name) const { return get(name) == "true"; }
  void set(const std::string& name, std::vector<std::string> v) { values_[name] = std::move(v); }

 private:
  std::string command_;
  std::map<std::string, std::vector<std::string>> values_;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string boolean(const std::string& key, const std::string& text) {
  std::string v = text;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return "true";
  if (v == "false" || v == "0" || v == "no" || v == "off") return "false";
  throw ConfigError(key + ": expected a boolean, got '" + text + "'");
}

const FlagSpec* find_flag(const std::string& name) {
  for (const auto& f : flag_table()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::map<std::string, std::vector<std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const FlagSpec* f = find_flag(key);
    if (!f || key == "config" || key == "print-config") {
      throw ConfigError(path + ":" + std::to_string(n) + ": unknown key '" + key + "'");
    }
    if (f->is_switch()) value = boolean(key, value);
    if (f->repeatable) {
      out[key].push_back(value);
    } else {
      out[key] = {value};
    }
  }
  return out;
}

double seconds(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative number of seconds, got '" + text + "'");
}

long long integer(const std::string& key, const std::string& text, long long lo, long long hi) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used == text.size() && v >= lo && v <= hi) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got '" +
                    text + "'");
}

Rational positive_rational(const std::string& key, const std::string& text) {
  try {
    Rational r = Rational::parse(text);
    if (r > Rational(0)) return r;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a positive rational, got '" + text + "'");
}

std::uint64_t seed_of(const Settings& s) {
  const std::string text = s.get("seed");
  try {
    std::size_t used = 0;
    auto v = std::stoull(text, &used);
    if (used == text.size() && text[0] != '-') return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("seed: expected an unsigned 64-bit integer, got '" + text + "'");
}

smt::SolverConfig solver_of(const Settings& s) {
  smt::SolverConfig c;
  c.command = s.get("solver");
  if (c.command.empty()) throw ConfigError("solver: empty command");
  c.args = s.list("solver-arg");
  if (c.args.empty()) c.args = fs::path(c.command).filename() == "z3" ? std::vector<std::string>{"-in"}
                                                                      : std::vector<std::string>{};
  if (!s.get("smt-timeout").empty()) c.timeout_s = seconds("smt-timeout", s.get("smt-timeout"));
  c.log_dir = s.get("log-smt");
  return c;
}

struct Inputs {
  std::optional<rcll::RcllInstance> instance;
  std::optional<pddl::DomainModel> domain;
  std::optional<pddl::ProblemModel> problem;
};

/// Checks which inputs were given; loading happens in load().
void check_inputs(const Settings& s) {
  bool inst = !s.get("instance").empty();
  bool dom = !s.get("domain").empty(), prob = !s.get("problem").empty();
  if (inst && (dom || prob)) throw ConfigError("give either --instance or --domain/--problem, not both");
  if (!inst && !(dom && prob)) throw ConfigError("an --instance or both --domain and --problem are required");
}

Inputs load(const Settings& s) {
  Inputs in;
  if (!s.get("instance").empty()) {
    in.instance = rcll::load_instance(s.get("instance"));
  } else {
    in.domain = pddl::load_domain(s.get("domain"));
    in.problem = pddl::load_problem(s.get("problem"), *in.domain);
  }
  return in;
}

pipeline::PlannerConfig planner_of(const Settings& s) {
  pipeline::PlannerConfig c;
  bool instance = !s.get("instance").empty();
  std::string engine = s.get("engine");
  if (engine == "auto") {
    c.engine = instance ? pipeline::Engine::RcllMacro : pipeline::Engine::Lifted;
  } else {
    c.engine = pipeline::parse_engine(engine);
  }
  if (!instance && c.engine != pipeline::Engine::Lifted) {
    throw ConfigError("engine " + engine + " needs an --instance; PDDL input runs on the lifted engine");
  }
  c.objective = pipeline::parse_objective(s.get("objective"));
  if (!s.get("occurrences").empty()) {
    try {
      c.occurrences = lifted::parse_occurrences(s.get("occurrences"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("occurrences: ") + e.what());
    }
  }
  if (!s.get("steps").empty()) c.steps = static_cast<int>(integer("steps", s.get("steps"), 1, 1000000));
  if (s.command() == "solve") {
    if (!s.get("timeout").empty()) c.timeout_s = seconds("timeout", s.get("timeout"));
    c.solver = solver_of(s);
  }
  c.epsilon = positive_rational("epsilon", s.get("epsilon"));
  if (!s.get("horizon").empty()) c.horizon = positive_rational("horizon", s.get("horizon"));
  c.symmetry_breaking = !s.on("no-symmetry");
  c.dump_smt = s.get("dump-smt");
  return c;
}

void report(const pipeline::SolveResult& r, std::ostream& err) {
  err << "outcome " << pipeline::to_string(r.outcome);
  if (r.cost) err << ", cost " << r.cost->decimal_str();
  if (!r.bound.empty()) err << ", bound " << r.bound;
  err << ", rounds " << r.rounds << ", " << r.seconds << " s\n";
  if (!r.diagnostics.empty()) err << r.diagnostics << "\n";
}

int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err) {
  check_inputs(s);
  auto config = planner_of(s);
  auto in = load(s);
  auto r = in.instance ? pipeline::solve_rcll(*in.instance, config) : pipeline::solve_pddl(*in.domain, *in.problem, config);
  report(r, err);
  if (r.outcome == pipeline::Outcome::Plan) {
    out << plan::render_plan(r.plan);
    if (!s.get("out").empty()) plan::save_plan(r.plan, s.get("out"));
  }
  return pipeline::exit_code(r.outcome);
}

int cmd_encode(const Settings& s, std::ostream& out) {
  check_inputs(s);
  auto config = planner_of(s);
  std::string path = config.dump_smt;
  config.dump_smt.clear();
  auto in = load(s);
  auto f = in.instance ? pipeline::encode_rcll(*in.instance, config) : pipeline::encode_pddl(*in.domain, *in.problem, config);
  std::string text = smt::emit_smtlib(f) + "(check-sat)\n";
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << text;
  }
  return 0;
}

std::string_view kind_name(plan::Violation::Kind k) {
  switch (k) {
    case plan::Violation::Kind::Goal: return "goal";
    case plan::Violation::Kind::Condition: return "condition";
    case plan::Violation::Kind::Permanent: return "violation";
  }
  return "violation";
}

int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err) {
  check_inputs(s);
  if (s.get("plan").empty()) throw ConfigError("--plan is required");
  Rational eps = positive_rational("epsilon", s.get("epsilon"));
  auto in = load(s);
  if (in.instance) {
    in.domain = pddl::parse_domain_text(rcll::domain_pddl());
    in.problem = pddl::parse_problem_text(rcll::problem_pddl(*in.instance), *in.domain);
  }
  auto p = plan::load_plan(s.get("plan"));
  auto r = plan::validate(p, *in.domain, *in.problem, eps);
  if (r.valid) {
    out << "valid\n";
    return 0;
  }
  const auto& v = *r.first_violation;
  err << "invalid: " << kind_name(v.kind) << " at " << v.time.decimal_str() << ": " << v.description << "\n";
  return 1;
}

int cmd_generate(const Settings& s, std::ostream& out) {
  std::uint64_t seed = seed_of(s);
  rcll::Complexity c;
  try {
    c = rcll::parse_complexity(s.get("complexity"));
  } catch (const std::exception&) {
    throw ConfigError("complexity: expected C0 or C1, got '" + s.get("complexity") + "'");
  }
  int robots = static_cast<int>(integer("robots", s.get("robots"), 1, 3));
  auto inst = bench::generate_instance(seed, c, robots);
  if (s.get("out").empty()) {
    out << rcll::write_instance(inst);
    return 0;
  }
  fs::path dir = s.get("out");
  fs::create_directories(dir);
  rcll::save_instance(inst, (dir / "instance.rcll").string());
  std::ofstream(dir / "problem.pddl", std::ios::binary) << rcll::problem_pddl(inst);
  std::ofstream(dir / "domain.pddl", std::ios::binary) << rcll::domain_pddl();
  out << (dir / "instance.rcll").string() << "\n";
  return 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_bench(const Settings& s, std::ostream& out) {
  bench::BenchConfig b;
  b.root = s.get("root");
  b.suite = s.get("suite");
  b.seed = seed_of(s);
  b.instances_per_cell = static_cast<int>(integer("instances", s.get("instances"), 1, 100000));
  b.workers = static_cast<int>(integer("workers", s.get("workers"), 1, 1024));
  b.timeout_s = s.get("timeout").empty() ? 60 : seconds("timeout", s.get("timeout"));
  if (b.timeout_s <= 0) throw ConfigError("timeout: must be positive");
  static const std::regex cell_re("c([01])-r([1-3])", std::regex::icase);
  for (const auto& cell : split(s.get("grid"), ',')) {
    std::smatch m;
    if (!std::regex_match(cell, m, cell_re)) throw ConfigError("grid: bad cell '" + cell + "'");
    b.grid.push_back({m[1] == "0" ? rcll::Complexity::C0 : rcll::Complexity::C1, std::stoi(m[2])});
  }
  auto standard = bench::standard_planners(solver_of(s), positive_rational("epsilon", s.get("epsilon")));
  for (auto& p : standard) p.config->symmetry_breaking = !s.on("no-symmetry");
  auto wanted = split(s.get("planners"), ',');
  if (wanted.size() == 1 && wanted[0] == "all") {
    b.planners = standard;
  } else {
    for (const auto& label : wanted) {
      auto it = std::find_if(standard.begin(), standard.end(), [&](const auto& p) { return p.label == label; });
      if (it == standard.end()) throw ConfigError("planners: unknown planner '" + label + "'");
      b.planners.push_back(*it);
    }
  }
  for (const auto& spec : s.list("planner-cmd")) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("planner-cmd: expected LABEL=TEMPLATE");
    b.planners.push_back({spec.substr(0, eq), std::nullopt, spec.substr(eq + 1), false});
  }
  b.check();
  auto rows = bench::run_suite(b);
  std::string dir = s.get("out").empty() ? b.suite_dir() : s.get("out");
  bench::emit_tables(rows, dir);
  out << bench::summary_table(bench::summarize(rows));
  return 0;
}

int dispatch(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.command() == "solve") return cmd_solve(s, out, err);
  if (s.command() == "encode") return cmd_encode(s, out);
  if (s.command() == "validate") return cmd_validate(s, out, err);
  if (s.command() == "generate") return cmd_generate(s, out);
  return cmd_bench(s, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal planning as satisfiability modulo theories"};
  app.require_subcommand(1);
  const std::map<std::string, std::string> about = {
      {"solve", "find a plan"},
      {"encode", "write the SMT-LIB formula of one bound without solving"},
      {"validate", "check a plan file"},
      {"generate", "generate an RCLL instance"},
      {"bench", "run a benchmark suite and tabulate the results"}};

  std::map<std::string, std::vector<std::string>> given;
  std::map<std::string, bool> switches;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    for (const auto& f : flag_table()) {
      if (!f.applies_to(name)) continue;
      std::string key = name + "/" + f.name;
      std::string help = f.help;
      if (!f.default_value.empty() && !f.is_switch()) help += " [" + f.default_value + "]";
      CLI::Option* opt;
      if (f.is_switch()) {
        opt = sub->add_flag("--" + f.name, switches[key], help);
      } else {
        opt = sub->add_option("--" + f.name, given[key], help)->type_name(f.value_name);
        opt->expected(1)->multi_option_policy(f.repeatable ? CLI::MultiOptionPolicy::TakeAll
                                                           : CLI::MultiOptionPolicy::TakeLast);
      }
      options[name][f.name] = opt;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << "Run with --help for usage.\n";
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  Settings settings(sub->get_name());
  try {
    std::map<std::string, std::vector<std::string>> file;
    std::string key_config = settings.command() + "/config";
    if (!given[key_config].empty()) file = read_config(given[key_config].back());
    for (const auto& f : flag_table()) {
      if (!f.applies_to(settings.command())) continue;
      std::string key = settings.command() + "/" + f.name;
      std::vector<std::string> v;
      if (options[settings.command()][f.name]->count() > 0) {
        v = f.is_switch() ? std::vector<std::string>{"true"} : given[key];
      } else if (file.count(f.name)) {
        v = file[f.name];
      } else if (!f.repeatable) {
        v = {f.default_value};
      }
      settings.set(f.name, v);
    }
    if (settings.on("print-config")) {
      for (const auto& f : flag_table()) {
        if (!f.applies_to(settings.command()) || f.name == "config" || f.name == "print-config") continue;
        const auto& v = settings.list(f.name);
        if (v.empty()) out << f.name << "=\n";
        for (const auto& x : v) out << f.name << "=" << x << "\n";
      }
      return 0;
    }
    return dispatch(settings, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    return 2;
  } catch (const pipeline::InternalSoundnessError& e) {
    err << "internal error: " << e.what() << "\n";
    for (const auto& line : e.report().trace) err << "  " << line << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chronosat::cli
