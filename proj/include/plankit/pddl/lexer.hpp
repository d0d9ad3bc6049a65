#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/diagnostics.hpp"

namespace plankit::pddl {

enum class TokenKind { lparen, rparen, keyword, variable, identifier, dash };

std::string_view to_string(TokenKind kind);

/// `text` holds the token as written; keywords keep their leading ':' and
/// variables their leading '?'.
struct Token {
  TokenKind kind;
  std::string text;
  Span span;
};

struct LexError : PlanningError {
  LexError(const std::string& what, Span span) : PlanningError(what), span(span) {}
  Span span;
};

/// Splits PDDL text into tokens. `;` starts a comment running to end of line.
/// Identifiers are a letter followed by letters, digits, '-' or '_'.
/// Throws LexError at the first character outside these classes.
std::vector<Token> tokenize(std::string_view text);

}  // namespace plankit::pddl
