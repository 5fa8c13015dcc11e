#include "chronosat/plan/plan.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace chronosat::plan {

bool step_less(const PlanStep& a, const PlanStep& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.action != b.action) return a.action < b.action;
  if (a.args != b.args) return a.args < b.args;
  return a.duration < b.duration;
}

void Plan::sort() { std::stable_sort(steps.begin(), steps.end(), step_less); }

Rational Plan::makespan() const {
  Rational m(0);
  for (const auto& s : steps) m = max(m, s.start + s.duration);
  return m;
}

std::string render_plan(const Plan& plan) {
  std::string out;
  for (const auto& s : plan.steps) {
    out += s.start.decimal_str() + ": (" + s.action;
    for (const auto& a : s.args) out += " " + a;
    out += ") [" + s.duration.decimal_str() + "]\n";
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Rational number(const std::string& text, int line) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw PlanFormatError(line, "bad number '" + text + "'");
  }
}

}  // namespace

Plan parse_plan(std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto semi = raw.find(';');
    std::string line = trim(semi == std::string::npos ? raw : raw.substr(0, semi));
    if (line.empty()) continue;
    auto colon = line.find(':');
    auto open = line.find('(');
    auto close = line.find(')');
    if (colon == std::string::npos || open == std::string::npos || close == std::string::npos || open < colon ||
        close < open) {
      throw PlanFormatError(line_no, "expected '<start>: (<action> ...) [<duration>]'");
    }
    PlanStep step;
    step.start = number(trim(line.substr(0, colon)), line_no);
    std::istringstream words(line.substr(open + 1, close - open - 1));
    std::string w;
    if (!(words >> w)) throw PlanFormatError(line_no, "missing action name");
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    step.action = w;
    while (words >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      step.args.push_back(w);
    }
    std::string rest = trim(line.substr(close + 1));
    if (!rest.empty()) {
      if (rest.front() != '[' || rest.back() != ']') throw PlanFormatError(line_no, "expected '[<duration>]'");
      step.duration = number(trim(rest.substr(1, rest.size() - 2)), line_no);
    }
    if (step.duration < Rational(0)) throw PlanFormatError(line_no, "negative duration");
    plan.steps.push_back(std::move(step));
  }
  plan.sort();
  return plan;
}

Plan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

void save_plan(const Plan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plan file '" + path + "'");
  out << render_plan(plan);
}

}  // namespace chronosat::plan
