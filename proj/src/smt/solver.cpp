#include "chronosat/smt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <iomanip>
#include <sstream>

extern char** environ;

namespace chronosat::smt {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

std::atomic<int> g_session_counter{0};

constexpr std::size_t kTranscriptCap = 1 << 22;

void append_capped(std::string& transcript, const std::string& text) {
  transcript += text;
  if (transcript.size() > kTranscriptCap) transcript.erase(0, transcript.size() - kTranscriptCap / 2);
}

void ignore_sigpipe() {
  static const bool once = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

// Minimal s-expression reader for solver replies.
struct SExpr {
  bool list = false;
  std::string atom;
  std::vector<SExpr> items;
};

SExpr read_sexpr(const std::string& s, std::size_t& i) {
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip();
  if (i >= s.size()) throw std::runtime_error("unexpected end of solver reply");
  if (s[i] == '(') {
    SExpr e;
    e.list = true;
    ++i;
    for (;;) {
      skip();
      if (i >= s.size()) throw std::runtime_error("unbalanced solver reply");
      if (s[i] == ')') {
        ++i;
        return e;
      }
      e.items.push_back(read_sexpr(s, i));
    }
  }
  if (s[i] == ')') throw std::runtime_error("unexpected ')' in solver reply");
  SExpr e;
  if (s[i] == '"' || s[i] == '|') {
    char q = s[i];
    std::size_t j = i + 1;
    while (j < s.size() && s[j] != q) ++j;
    e.atom = s.substr(i, j + 1 - i);
    i = j + 1;
    return e;
  }
  std::size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')') ++j;
  e.atom = s.substr(i, j - i);
  i = j;
  return e;
}

Rational numeral_of(const SExpr& e) {
  if (!e.list) return Rational::parse(e.atom);
  if (e.items.size() == 2 && !e.items[0].list && e.items[0].atom == "-") return -numeral_of(e.items[1]);
  if (e.items.size() == 3 && !e.items[0].list && e.items[0].atom == "/") {
    return numeral_of(e.items[1]) / numeral_of(e.items[2]);
  }
  throw std::runtime_error("unsupported value expression in solver reply");
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::ostringstream os;
  os << std::put_time(std::gmtime(&t), "%FT%T") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
  return os.str();
}

}  // namespace

Rational parse_numeral(const std::string& text) {
  std::size_t i = 0;
  return numeral_of(read_sexpr(text, i));
}

std::vector<std::pair<std::string, Value>> parse_get_value(const std::string& reply) {
  std::size_t i = 0;
  SExpr e = read_sexpr(reply, i);
  if (!e.list) throw std::runtime_error("get-value reply is not a list");
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& pair : e.items) {
    if (!pair.list || pair.items.size() != 2 || pair.items[0].list) {
      throw std::runtime_error("malformed get-value entry");
    }
    const SExpr& v = pair.items[1];
    Value val;
    if (!v.list && (v.atom == "true" || v.atom == "false")) {
      val.sort = Sort::Bool;
      val.boolean = v.atom == "true";
    } else {
      val.sort = Sort::Real;
      val.number = numeral_of(v);
    }
    out.emplace_back(pair.items[0].atom, val);
  }
  return out;
}

SolverSession::SolverSession(SolverConfig config) : config_(std::move(config)) {
  ignore_sigpipe();
  if (!config_.log_dir.empty()) {
    std::filesystem::create_directories(config_.log_dir);
    auto path = std::filesystem::path(config_.log_dir) /
                ("session-" + std::to_string(::getpid()) + "-" + std::to_string(g_session_counter++) + ".smt2");
    log_.open(path);
  }
  start();
}

SolverSession::~SolverSession() { stop(); }

void SolverSession::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw SmtError(SmtErrorKind::SolverCrashed, "pipe() failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::vector<std::string> argv_store{config_.command};
  argv_store.insert(argv_store.end(), config_.args.begin(), config_.args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, config_.command.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw SmtError(SmtErrorKind::SolverCrashed,
                   "cannot start solver '" + config_.command + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  pending_.clear();
  depth_ = 0;
  send("(set-option :print-success false)\n(set-option :produce-models true)\n");
}

void SolverSession::stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

void SolverSession::crash(const std::string& why) {
  stop();
  throw SmtError(SmtErrorKind::SolverCrashed, "solver '" + config_.command + "' failed: " + why, transcript_);
}

void SolverSession::send(const std::string& text) {
  if (pid_ <= 0) throw SmtError(SmtErrorKind::SolverCrashed, "solver session is not running", transcript_);
  append_capped(transcript_, text);
  if (log_.is_open()) log_ << "; >> " << timestamp() << "\n" << text << std::flush;
  std::size_t off = 0;
  while (off < text.size()) {
    ssize_t n = ::write(to_child_, text.data() + off, text.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      crash("write to solver failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SolverSession::read_reply() {
  auto started = Clock::now();
  std::optional<Clock::time_point> limit = deadline_;
  if (config_.timeout_s) {
    auto t = started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*config_.timeout_s));
    limit = limit ? std::min(*limit, t) : t;
  }
  for (;;) {
    // Try to cut one complete reply out of pending_.
    std::size_t i = 0;
    while (i < pending_.size() && std::isspace(static_cast<unsigned char>(pending_[i]))) ++i;
    if (i < pending_.size()) {
      if (pending_[i] == '(') {
        int depth = 0;
        bool in_str = false;
        for (std::size_t j = i; j < pending_.size(); ++j) {
          char c = pending_[j];
          if (in_str) {
            if (c == '"') in_str = false;
            continue;
          }
          if (c == '"') in_str = true;
          else if (c == '(') ++depth;
          else if (c == ')' && --depth == 0) {
            std::string reply = pending_.substr(i, j + 1 - i);
            pending_.erase(0, j + 1);
            return reply;
          }
        }
      } else {
        std::size_t j = i;
        while (j < pending_.size() && !std::isspace(static_cast<unsigned char>(pending_[j]))) ++j;
        if (j < pending_.size()) {
          std::string reply = pending_.substr(i, j - i);
          pending_.erase(0, j);
          return reply;
        }
      }
    }
    int wait_ms = -1;
    if (limit) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*limit - Clock::now()).count();
      if (left <= 0) {
        stop();
        throw SmtError(SmtErrorKind::Timeout, "solver exceeded its time budget", transcript_);
      }
      wait_ms = static_cast<int>(std::min<long long>(left, 1000 * 60 * 60));
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = poll(&pfd, 1, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      crash("poll failed");
    }
    if (rc == 0) continue;
    char buf[65536];
    ssize_t n = ::read(from_child_, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      crash("read from solver failed");
    }
    if (n == 0) crash("solver closed its output unexpectedly; partial output: " + pending_);
    std::string chunk(buf, static_cast<std::size_t>(n));
    append_capped(transcript_, "; " + chunk);
    if (log_.is_open()) {
      std::string commented;
      std::istringstream lines(chunk);
      for (std::string line; std::getline(lines, line);) commented += "; " + line + "\n";
      log_ << "; << " << timestamp() << "\n" << commented << std::flush;
    }
    pending_ += chunk;
  }
}

void SolverSession::load(const Formula& f) {
  if (loaded_ != nullptr || depth_ != 0) {
    stop();
    start();
  }
  send(emit_smtlib(f));
  declared_ = f.declarations();
  loaded_ = &f;
}

void SolverSession::assert_term(const Term& t) { send("(assert " + to_smtlib(t) + ")\n"); }

void SolverSession::push() {
  send("(push 1)\n");
  ++depth_;
}

void SolverSession::pop() {
  if (depth_ == 0) throw SmtError(SmtErrorKind::IllFormed, "pop without matching push");
  send("(pop 1)\n");
  --depth_;
}

CheckResult SolverSession::check_sat() {
  auto started = Clock::now();
  struct Tally {
    SessionStats& s;
    Clock::time_point t0;
    ~Tally() { s.wall_seconds += std::chrono::duration<double>(Clock::now() - t0).count(); }
  } tally{stats_, started};
  ++stats_.check_sat_calls;
  send("(check-sat)\n");
  std::string reply = read_reply();
  CheckResult r;
  if (reply == "sat") {
    r.verdict = Verdict::Sat;
    constexpr std::size_t kChunk = 256;
    for (std::size_t i = 0; i < declared_.size(); i += kChunk) {
      std::string q = "(get-value (";
      for (std::size_t k = i; k < std::min(declared_.size(), i + kChunk); ++k) {
        if (k != i) q += ' ';
        q += declared_[k].first;
      }
      send(q + "))\n");
      std::string vals = read_reply();
      if (vals.rfind("(error", 0) == 0) crash("get-value failed: " + vals);
      try {
        for (auto& [name, v] : parse_get_value(vals)) {
          auto decl = std::find_if(declared_.begin(), declared_.end(), [&](const auto& d) { return d.first == name; });
          if (decl != declared_.end()) v.sort = decl->second;
          r.model.set(name, v);
        }
      } catch (const std::exception& e) {
        crash(std::string("malformed get-value reply: ") + e.what());
      }
    }
    for (const auto& [name, sort] : declared_) {
      if (!r.model.has(name)) crash("model lacks a value for '" + name + "'");
    }
  } else if (reply == "unsat") {
    r.verdict = Verdict::Unsat;
  } else if (reply == "unknown") {
    r.verdict = Verdict::Unknown;
    send("(get-info :reason-unknown)\n");
    r.diagnostics = read_reply();
  } else {
    crash("unexpected reply to check-sat: " + reply);
  }
  return r;
}

CheckResult check(SolverSession& session, const Formula& f) {
  session.load(f);
  return session.check_sat();
}

MinimizeResult minimize(SolverSession& session, const Formula& f, const Term& objective,
                        const MinimizeOptions& options) {
  if (!objective.is_numeric()) throw SmtError(SmtErrorKind::IllFormed, "objective must be numeric");
  MinimizeResult result;
  session.load(f);
  CheckResult first = session.check_sat();
  result.iterations = 1;
  if (first.verdict == Verdict::Unsat) {
    result.status = MinimizeStatus::Infeasible;
    return result;
  }
  if (first.verdict == Verdict::Unknown) {
    result.status = MinimizeStatus::Unknown;
    result.diagnostics = first.diagnostics;
    return result;
  }
  result.model = first.model;
  result.value = evaluate(objective, first.model).number;
  for (;;) {
    if (result.iterations >= options.iteration_cap) {
      result.status = MinimizeStatus::Unknown;
      result.diagnostics = "iteration cap reached";
      return result;
    }
    auto constant = [&](const Rational& v) {
      return objective.sort() == Sort::Int && v.is_integer() ? Term::integer(v) : Term::real(v);
    };
    Term bound = options.strict_step ? objective < constant(*result.value)
                                     : objective <= constant(*result.value - options.step);
    if (session.incremental()) {
      if (session.depth() > 0) session.pop();
      session.push();
    } else {
      session.load(f);
    }
    session.assert_term(bound);
    CheckResult next = session.check_sat();
    ++result.iterations;
    if (next.verdict == Verdict::Unsat) {
      if (session.depth() > 0) session.pop();
      result.status = MinimizeStatus::Optimal;
      return result;
    }
    if (next.verdict == Verdict::Unknown) {
      if (session.depth() > 0) session.pop();
      result.status = MinimizeStatus::Unknown;
      result.diagnostics = next.diagnostics;
      return result;
    }
    result.model = next.model;
    result.value = evaluate(objective, next.model).number;
  }
}

}  // namespace chronosat::smt
