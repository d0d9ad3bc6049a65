#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/pddl/ast.hpp"
#include "plankit/pddl/types.hpp"

namespace plankit::pddl {

struct ObjectEntry {
  Symbol name;
  Symbol type;
};

/// A problem resolved against its domain: one object table regardless of
/// how objects were declared, checked init and goal, and the type tree.
class LinkedProblem {
public:
  std::shared_ptr<const DomainAst> domain;
  std::shared_ptr<const ProblemAst> problem;
  TypeHierarchy types;
  std::vector<ObjectEntry> objects;  // domain constants first, then declaration order
  std::vector<GroundAtom> init;
  Goal goal;
  /// Set when any precondition or goal uses `(not ...)`.
  bool negative_preconditions = false;

  std::optional<Symbol> type_of(Symbol object) const;
  /// Position in `objects`; defines the canonical argument order.
  std::optional<std::size_t> index_of(Symbol object) const;

  void add_object(Symbol name, Symbol type);

private:
  std::unordered_map<Symbol, std::size_t> index_;
};

/// Resolves names. Objects may be declared in `:objects`, through unary
/// atoms in `:init` whose predicate names a declared type (`(room hallway)`),
/// or, in untyped domains, simply by use. Reports domain-name mismatch,
/// unknown predicates/objects/types, and arity or type errors.
Result<LinkedProblem> link(const DomainAst& domain, const ProblemAst& problem);

}  // namespace plankit::pddl
