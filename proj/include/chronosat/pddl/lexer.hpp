#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chronosat::pddl {

/// 1-based source position of a token and the number of characters it spans.
struct Position {
  int line = 1;
  int column = 1;
  int length = 1;

  bool contains(int l, int c) const { return l == line && c >= column && c < column + length; }
  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
  friend bool operator==(const Position&, const Position&) = default;
};

enum class ErrorKind {
  UnterminatedString,
  IllegalCharacter,
  SyntaxError,
  UnsupportedRequirement,
  ArityMismatch,
  UndeclaredSymbol,
  DuplicateSymbol,
  TypeCycle,
  ContradictoryInit,
  UnknownDomainReference,
};

std::string_view to_string(ErrorKind kind);

/// Every frontend diagnostic carries the position of the offending token.
class PddlError : public std::runtime_error {
 public:
  PddlError(ErrorKind kind, Position pos, const std::string& message);

  ErrorKind kind() const { return kind_; }
  const Position& position() const { return pos_; }

 private:
  ErrorKind kind_;
  Position pos_;
};

enum class TokenKind { Open, Close, Symbol, Keyword, Variable, Number };

/// Symbol, keyword and variable text is lower-cased; keywords drop the
/// leading ':' and variables the leading '?'.
struct Token {
  TokenKind kind;
  std::string text;
  Position pos;

  friend bool operator==(const Token& a, const Token& b) { return a.kind == b.kind && a.text == b.text; }
};

std::vector<Token> tokenize(std::string_view text);

}  // namespace chronosat::pddl
