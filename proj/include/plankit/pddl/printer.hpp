#pragma once

#include <string>

#include "plankit/pddl/ast.hpp"

namespace plankit::pddl {

/// Canonical PDDL text. Parsing the output yields a structurally equal tree.
std::string pretty_print(const DomainAst& domain);
std::string pretty_print(const ProblemAst& problem);

std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);

}  // namespace plankit::pddl
