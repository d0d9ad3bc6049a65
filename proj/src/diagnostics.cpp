#include "plankit/diagnostics.hpp"

#include <algorithm>

namespace plankit {

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::lex_error: return "lex-error";
    case DiagnosticCode::syntax_error: return "syntax-error";
    case DiagnosticCode::unsupported_construct: return "unsupported-construct";
    case DiagnosticCode::duplicate_definition: return "duplicate-definition";
    case DiagnosticCode::undeclared_variable: return "undeclared-variable";
    case DiagnosticCode::unknown_type: return "unknown-type";
    case DiagnosticCode::type_cycle: return "type-cycle";
    case DiagnosticCode::unknown_predicate: return "unknown-predicate";
    case DiagnosticCode::arity_mismatch: return "arity-mismatch";
    case DiagnosticCode::type_mismatch: return "type-mismatch";
    case DiagnosticCode::unknown_object: return "unknown-object";
    case DiagnosticCode::domain_name_mismatch: return "domain-name-mismatch";
    case DiagnosticCode::unknown_task: return "unknown-task";
    case DiagnosticCode::ignored_requirements: return "ignored-requirements";
    case DiagnosticCode::other: return "other";
  }
  return "other";
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::string out;
  if (!file.empty()) {
    out += file;
    out += ':';
  }
  out += std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
  out += d.severity == Severity::error ? "error" : "warning";
  out += " [";
  out += to_string(d.code);
  out += "]: " + d.message;
  if (d.related) out += " (see " + std::to_string(d.related->line) + ":" + std::to_string(d.related->column) + ")";
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

SourceMap::SourceMap(std::string_view text) : size_(text.size()) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  }
}

Span SourceMap::span(std::size_t offset, std::size_t length) const {
  offset = std::min(offset, size_);
  length = std::min(length, size_ - offset);
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
  return Span{offset, length, line, offset - line_starts_[line - 1] + 1};
}

}  // namespace plankit
