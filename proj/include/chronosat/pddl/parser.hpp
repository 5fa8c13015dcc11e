#pragma once

#include <span>
#include <string>
#include <string_view>

#include "chronosat/pddl/lexer.hpp"
#include "chronosat/pddl/model.hpp"

namespace chronosat::pddl {

/// Requirements flags accepted by the frontend. Anything else raises
/// UnsupportedRequirement naming the flag.
std::span<const std::string_view> supported_requirements();

DomainModel parse_domain(std::span<const Token> tokens);
ProblemModel parse_problem(std::span<const Token> tokens, const DomainModel& domain);

DomainModel parse_domain_text(std::string_view text);
ProblemModel parse_problem_text(std::string_view text, const DomainModel& domain);

DomainModel load_domain(const std::string& path);
ProblemModel load_problem(const std::string& path, const DomainModel& domain);

/// Canonical PDDL text; parsing it back yields an identical model.
std::string print_domain(const DomainModel& domain);
std::string print_problem(const ProblemModel& problem);

std::string print_formula(const Formula& f);
std::string print_atom(const Atom& a);
std::string print_numeric(const NumericExpr& e);

}  // namespace chronosat::pddl
