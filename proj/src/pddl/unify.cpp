#include "plankit/pddl/unify.hpp"

#include <algorithm>

namespace plankit::pddl {

std::optional<Symbol> Binding::get(Symbol variable) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == variable; });
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Binding::bind(Symbol variable, Symbol value) {
  if (auto existing = get(variable)) return *existing == value;
  entries_.emplace_back(variable, value);
  return true;
}

std::string to_string(const Binding& b) {
  std::string out = "{";
  for (std::size_t i = 0; i < b.entries().size(); ++i) {
    if (i) out += ", ";
    out += b.entries()[i].first.text() + " -> " + b.entries()[i].second.text();
  }
  return out + "}";
}

std::optional<Binding> unify(const Atom& pattern, const GroundAtom& atom, Binding seed) {
  if (pattern.head != atom.predicate || pattern.args.size() != atom.args.size()) return std::nullopt;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& t = pattern.args[i];
    if (t.variable) {
      if (!seed.bind(t.name, atom.args[i])) return std::nullopt;
    } else if (t.name != atom.args[i]) {
      return std::nullopt;
    }
  }
  return seed;
}

GroundAtom substitute(const Atom& pattern, const Binding& b) {
  GroundAtom out{pattern.head, {}};
  out.args.reserve(pattern.args.size());
  for (const Term& t : pattern.args) {
    if (!t.variable) {
      out.args.push_back(t.name);
      continue;
    }
    auto v = b.get(t.name);
    if (!v) throw PlanningError("unbound variable " + t.name.text() + " in (" + pattern.head.text() + " ...)");
    out.args.push_back(*v);
  }
  return out;
}

}  // namespace plankit::pddl
