#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/pddl/ast.hpp"

namespace plankit::pddl {

/// Variable-to-object substitution. Small, so a flat vector.
class Binding {
public:
  std::optional<Symbol> get(Symbol variable) const;
  /// False if `variable` is already bound to a different value.
  bool bind(Symbol variable, Symbol value);
  const std::vector<std::pair<Symbol, Symbol>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const Binding&, const Binding&) = default;

private:
  std::vector<std::pair<Symbol, Symbol>> entries_;
};

std::string to_string(const Binding& b);

/// Binds pattern variables to the atom's arguments position by position,
/// extending `seed`. Returns nullopt on a different predicate, arity, or
/// constant, or when a repeated variable would need two values.
std::optional<Binding> unify(const Atom& pattern, const GroundAtom& atom, Binding seed = {});

/// Replaces variables using `b`. Throws PlanningError on an unbound variable.
GroundAtom substitute(const Atom& pattern, const Binding& b);

}  // namespace plankit::pddl
