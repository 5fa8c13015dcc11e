#include "chronosat/pddl/lexer.hpp"

#include <cctype>

namespace chronosat::pddl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnterminatedString: return "UnterminatedString";
    case ErrorKind::IllegalCharacter: return "IllegalCharacter";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedRequirement: return "UnsupportedRequirement";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::TypeCycle: return "TypeCycle";
    case ErrorKind::ContradictoryInit: return "ContradictoryInit";
    case ErrorKind::UnknownDomainReference: return "UnknownDomainReference";
  }
  return "?";
}

PddlError::PddlError(ErrorKind kind, Position pos, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " at " + pos.str() + ": " + message),
      kind_(kind),
      pos_(pos) {}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '<' ||
         c == '>' || c == '=' || c == '+' || c == '*' || c == '/' || c == '.';
}

bool looks_numeric(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  bool dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return s.back() != '.';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Position pos{line, col, 1};
    if (c == '(' || c == ')') {
      tokens.push_back({c == '(' ? TokenKind::Open : TokenKind::Close, std::string(1, c), pos});
      advance(1);
      continue;
    }
    if (c == '"') {
      std::size_t end = text.find('"', i + 1);
      std::size_t nl = text.find('\n', i + 1);
      if (end == std::string_view::npos || (nl != std::string_view::npos && nl < end)) {
        throw PddlError(ErrorKind::UnterminatedString, pos, "string literal is not closed");
      }
      pos.length = static_cast<int>(end - i + 1);
      tokens.push_back({TokenKind::Symbol, std::string(text.substr(i, end - i + 1)), pos});
      advance(end - i + 1);
      continue;
    }
    std::size_t start = i;
    std::size_t j = i;
    if (c == '?' || c == ':') ++j;
    while (j < text.size() && is_name_char(text[j])) ++j;
    if (j == start || (j == start + 1 && (c == '?' || c == ':'))) {
      throw PddlError(ErrorKind::IllegalCharacter, pos,
                      std::string("unexpected character '") + c + "'");
    }
    std::string_view word = text.substr(start, j - start);
    pos.length = static_cast<int>(word.size());
    if (c == '?') {
      tokens.push_back({TokenKind::Variable, lower(word.substr(1)), pos});
    } else if (c == ':') {
      tokens.push_back({TokenKind::Keyword, lower(word.substr(1)), pos});
    } else if (looks_numeric(word)) {
      tokens.push_back({TokenKind::Number, std::string(word), pos});
    } else {
      tokens.push_back({TokenKind::Symbol, lower(word), pos});
    }
    advance(j - start);
  }
  return tokens;
}

}  // namespace chronosat::pddl
