#include "plankit/pddl/lexer.hpp"

#include <cctype>

namespace plankit::pddl {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::keyword: return "keyword";
    case TokenKind::variable: return "variable";
    case TokenKind::identifier: return "identifier";
    case TokenKind::dash: return "'-'";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view text) {
  SourceMap map(text);
  std::vector<Token> tokens;
  std::size_t i = 0;

  auto scan_name = [&](std::size_t from) {
    std::size_t j = from;
    while (j < text.size() && is_name_char(text[j])) ++j;
    return j;
  };

  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    TokenKind kind;
    if (c == '(') {
      kind = TokenKind::lparen;
      ++i;
    } else if (c == ')') {
      kind = TokenKind::rparen;
      ++i;
    } else if (c == '-') {
      kind = TokenKind::dash;
      ++i;
    } else if (c == '?' || c == ':') {
      if (i + 1 >= text.size() || !is_letter(text[i + 1])) {
        throw LexError(std::string("expected a name after '") + c + "'", map.span(start, 1));
      }
      kind = c == '?' ? TokenKind::variable : TokenKind::keyword;
      i = scan_name(i + 1);
    } else if (is_letter(c)) {
      kind = TokenKind::identifier;
      i = scan_name(i);
    } else {
      std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + std::to_string(static_cast<unsigned char>(c));
      throw LexError("illegal character '" + shown + "'", map.span(start, 1));
    }
    tokens.push_back(Token{kind, std::string(text.substr(start, i - start)), map.span(start, i - start)});
  }
  return tokens;
}

}  // namespace plankit::pddl
