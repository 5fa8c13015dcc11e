#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronosat/rational.hpp"

namespace chronosat::smt {

enum class Sort { Bool, Int, Real };

std::string_view to_string(Sort s);

enum class SmtErrorKind { IllFormed, SolverCrashed, Timeout, IncompleteModel };

class SmtError : public std::runtime_error {
 public:
  SmtError(SmtErrorKind kind, const std::string& message, std::string transcript = {})
      : std::runtime_error(message), kind_(kind), transcript_(std::move(transcript)) {}
  SmtErrorKind kind() const { return kind_; }
  const std::string& transcript() const { return transcript_; }

 private:
  SmtErrorKind kind_;
  std::string transcript_;
};

enum class Op { True, False, Number, Var, And, Or, Not, Implies, Ite, Eq, Le, Lt, Add, Sub, Scale };

class Term;

struct TermNode {
  Op op;
  Sort sort;
  Rational value;  // Number constant, or the coefficient of Scale
  std::string name;
  std::vector<Term> args;
};

/// Immutable, cheaply copyable handle to a term DAG. Construction checks
/// sorts and throws SmtError(IllFormed) on violations.
class Term {
 public:
  Term();  // the constant true

  static Term boolean(bool b);
  static Term integer(Rational v);  // v must be integral
  static Term real(Rational v);
  static Term var(std::string name, Sort sort);

  Op op() const { return node_->op; }
  Sort sort() const { return node_->sort; }
  bool is_numeric() const { return sort() != Sort::Bool; }
  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }
  const Rational& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }

  friend Term operator+(const Term& a, const Term& b);
  friend Term operator-(const Term& a, const Term& b);
  friend Term operator*(const Rational& k, const Term& t);
  friend Term operator<=(const Term& a, const Term& b);
  friend Term operator<(const Term& a, const Term& b);
  friend Term operator>=(const Term& a, const Term& b);
  friend Term operator>(const Term& a, const Term& b);
  friend Term operator!(const Term& a);
  friend Term operator&&(const Term& a, const Term& b);
  friend Term operator||(const Term& a, const Term& b);

  /// Pointer identity; structural equality is not needed by the encoders.
  bool same(const Term& o) const { return node_ == o.node_; }

  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const TermNode> node_;
};

Term conj(std::vector<Term> parts);
Term disj(std::vector<Term> parts);
Term implies(const Term& a, const Term& b);
Term ite(const Term& c, const Term& a, const Term& b);
Term eq(const Term& a, const Term& b);
Term sum(const std::vector<Term>& parts, Sort empty_sort = Sort::Real);
Term max(const Term& a, const Term& b);

/// Values assigned by a model.
struct Value {
  Sort sort = Sort::Bool;
  bool boolean = false;
  Rational number;

  friend bool operator==(const Value&, const Value&) = default;
};

class Model {
 public:
  void set(const std::string& name, Value v) { values_[name] = v; }
  bool has(const std::string& name) const { return values_.count(name) > 0; }
  const Value& at(const std::string& name) const;
  bool get_bool(const std::string& name) const { return at(name).boolean; }
  Rational get_number(const std::string& name) const { return at(name).number; }
  const std::map<std::string, Value>& values() const { return values_; }

 private:
  std::map<std::string, Value> values_;
};

/// Evaluates a term under a model. Variables missing from the model raise
/// SmtError(IncompleteModel).
Value evaluate(const Term& t, const Model& m);

/// Declarations plus ordered assertions.
class Formula {
 public:
  struct Assertion {
    Term term;
    std::string label;  // optional `:named` label
  };

  /// Declares a fresh variable; duplicates raise IllFormed.
  Term declare(const std::string& name, Sort sort);
  void add(Term t, std::string label = {});

  const std::vector<std::pair<std::string, Sort>>& declarations() const { return decls_; }
  const std::vector<Assertion>& assertions() const { return asserts_; }
  bool declared(const std::string& name) const { return index_.count(name) > 0; }
  std::optional<Sort> sort_of(const std::string& name) const;

 private:
  std::vector<std::pair<std::string, Sort>> decls_;
  std::map<std::string, Sort> index_;
  std::vector<Assertion> asserts_;
};

/// SMT-LIB 2.6 text of a term.
std::string to_smtlib(const Term& t);

/// `(set-logic ...)`, then declare-const per declaration, then assert per
/// assertion. Throws IllFormed on undeclared or mis-sorted variables.
std::string emit_smtlib(const Formula& f);

/// Smallest logic covering the numeric sorts used.
std::string logic_for(const Formula& f);

/// SMT-LIB literal for a constant of the given numeric sort.
std::string number_literal(const Rational& v, Sort sort);

}  // namespace chronosat::smt
