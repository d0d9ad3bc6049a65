#pragma once

#include <unordered_map>
#include <vector>

#include "plankit/pddl/ast.hpp"

namespace plankit::pddl {

/// Single-inheritance type tree rooted at `object`. Parent types that are
/// named but never declared themselves become children of `object`.
class TypeHierarchy {
public:
  /// Builds the tree, reporting unsupported multiple parents and cycles.
  /// Offending declarations are dropped so the result is always a tree.
  static TypeHierarchy build(const std::vector<TypeDecl>& decls, std::vector<Diagnostic>& diagnostics);

  TypeHierarchy();

  bool contains(Symbol type) const { return parent_.count(type) != 0; }
  /// Reflexive and transitive.
  bool is_subtype(Symbol type, Symbol ancestor) const;
  /// Parent of `type`; `object` is its own parent.
  Symbol parent(Symbol type) const;
  /// All known types, `object` first, then in declaration order.
  const std::vector<Symbol>& types() const { return order_; }

private:
  std::unordered_map<Symbol, Symbol> parent_;
  std::vector<Symbol> order_;
};

}  // namespace plankit::pddl
