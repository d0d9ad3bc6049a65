#include "plankit/pddl/types.hpp"

#include <unordered_set>

namespace plankit::pddl {

Symbol object_type() {
  static const Symbol object("object");
  return object;
}

TypeHierarchy::TypeHierarchy() {
  parent_.emplace(object_type(), object_type());
  order_.push_back(object_type());
}

TypeHierarchy TypeHierarchy::build(const std::vector<TypeDecl>& decls, std::vector<Diagnostic>& diagnostics) {
  TypeHierarchy h;
  std::unordered_map<Symbol, const TypeDecl*> declared;

  for (const auto& d : decls) {
    if (d.name == object_type()) {
      if (d.parent != object_type()) {
        diagnostics.push_back({Severity::error, DiagnosticCode::type_cycle, "built-in type 'object' cannot have a parent", d.span, {}});
      }
      continue;
    }
    if (auto it = declared.find(d.name); it != declared.end()) {
      if (it->second->parent != d.parent) {
        diagnostics.push_back({Severity::error, DiagnosticCode::duplicate_definition,
                               "type '" + d.name.text() + "' declared with two different parents (multiple inheritance is not supported)",
                               d.span, it->second->span});
      }
      continue;
    }
    declared.emplace(d.name, &d);
    h.parent_[d.name] = d.parent;
    h.order_.push_back(d.name);
  }

  // Implicit parents hang directly below object.
  for (const auto& d : decls) {
    if (!h.parent_.count(d.parent)) {
      h.parent_[d.parent] = object_type();
      h.order_.push_back(d.parent);
    }
  }

  // Break cycles: walk each chain; any type revisited before reaching object is cyclic.
  for (Symbol start : std::vector<Symbol>(h.order_)) {
    std::unordered_set<Symbol> seen;
    Symbol t = start;
    while (t != object_type()) {
      if (!seen.insert(t).second) {
        const TypeDecl* decl = declared.count(t) ? declared.at(t) : nullptr;
        diagnostics.push_back({Severity::error, DiagnosticCode::type_cycle,
                               "type '" + t.text() + "' is part of a cycle and does not reach 'object'",
                               decl ? decl->span : Span{}, {}});
        h.parent_[t] = object_type();
        break;
      }
      t = h.parent_.at(t);
    }
  }
  return h;
}

bool TypeHierarchy::is_subtype(Symbol type, Symbol ancestor) const {
  if (!contains(type) || !contains(ancestor)) return false;
  for (Symbol t = type;; t = parent_.at(t)) {
    if (t == ancestor) return true;
    if (t == object_type()) return false;
  }
}

Symbol TypeHierarchy::parent(Symbol type) const {
  auto it = parent_.find(type);
  return it == parent_.end() ? object_type() : it->second;
}

}  // namespace plankit::pddl
