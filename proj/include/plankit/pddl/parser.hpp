#pragma once

#include <string_view>

#include "plankit/diagnostics.hpp"
#include "plankit/pddl/ast.hpp"

namespace plankit::pddl {

struct ParseOptions {
  /// Accept `:task`, `:method` and `(:htn ...)` sections.
  bool allow_htn = false;
};

/// Parses and checks a domain: unique names, declared types and predicates,
/// arity and type agreement, and variables bound by the enclosing parameters.
/// Structural problems are reported as diagnostics; parsing resumes at the
/// next section of the `define` form.
Result<DomainAst> parse_domain(std::string_view text, ParseOptions options = {});

/// Parses a problem. Only syntax and groundness are checked here; names are
/// resolved against a domain by `link`.
Result<ProblemAst> parse_problem(std::string_view text, ParseOptions options = {});

enum class FileKind { domain, problem, unknown };

/// Looks at the `(define (domain|problem ...))` header without a full parse.
FileKind detect_kind(std::string_view text);

}  // namespace plankit::pddl
