#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plankit {

/// Location in source text. `line` and `column` are 1-based; `offset` is a
/// byte offset and `length` the number of bytes covered.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { error, warning };

/// Stable identifiers for diagnostics that callers test for.
enum class DiagnosticCode {
  lex_error,
  syntax_error,
  unsupported_construct,
  duplicate_definition,
  undeclared_variable,
  unknown_type,
  type_cycle,
  unknown_predicate,
  arity_mismatch,
  type_mismatch,
  unknown_object,
  domain_name_mismatch,
  unknown_task,
  ignored_requirements,
  other,
};

struct Diagnostic {
  Severity severity = Severity::error;
  DiagnosticCode code = DiagnosticCode::other;
  std::string message;
  Span span;
  std::optional<Span> related;  // e.g. the earlier definition of a duplicate
};

std::string_view to_string(DiagnosticCode code);

/// "line:col: error: message" rendering, with an optional file prefix.
std::string format_diagnostic(const Diagnostic& d, std::string_view file = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Value plus accumulated diagnostics. The value is present iff no error
/// diagnostic was produced; warnings may accompany a value.
template <typename T>
struct Result {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

/// Line/column bookkeeping for a text buffer.
class SourceMap {
public:
  explicit SourceMap(std::string_view text);
  Span span(std::size_t offset, std::size_t length) const;
  std::size_t size() const { return size_; }

private:
  std::vector<std::size_t> line_starts_;
  std::size_t size_;
};

}  // namespace plankit
