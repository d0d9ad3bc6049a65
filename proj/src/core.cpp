#include "plankit/core.hpp"

#include <algorithm>
#include <iterator>
#include <ostream>
#include <sstream>

namespace plankit {

namespace {

void hash_combine(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

}  // namespace

GroundAtom make_atom(std::string_view predicate, std::initializer_list<std::string_view> args) {
  GroundAtom atom{Symbol(predicate), {}};
  for (auto a : args) atom.args.emplace_back(a);
  return atom;
}

std::string to_string(const GroundAtom& atom) {
  std::string out = "(" + atom.predicate.text();
  for (Symbol a : atom.args) out += " " + a.text();
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const GroundAtom& atom) { return os << to_string(atom); }

std::size_t hash_value(const GroundAtom& atom) {
  std::size_t seed = std::hash<Symbol>{}(atom.predicate);
  for (Symbol a : atom.args) hash_combine(seed, std::hash<Symbol>{}(a));
  return seed;
}

AtomSet::AtomSet(std::vector<GroundAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool AtomSet::contains(const GroundAtom& atom) const { return std::binary_search(atoms_.begin(), atoms_.end(), atom); }

bool AtomSet::includes(const AtomSet& other) const {
  return std::includes(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end());
}

bool AtomSet::intersects(const AtomSet& other) const {
  auto a = atoms_.begin();
  auto b = other.atoms_.begin();
  while (a != atoms_.end() && b != other.atoms_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return true;
    }
  }
  return false;
}

AtomSet AtomSet::united(const AtomSet& other) const {
  AtomSet out;
  out.atoms_.reserve(atoms_.size() + other.atoms_.size());
  std::set_union(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
                 std::back_inserter(out.atoms_));
  return out;
}

AtomSet AtomSet::minus(const AtomSet& other) const {
  AtomSet out;
  std::set_difference(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
                      std::back_inserter(out.atoms_));
  return out;
}

AtomSet AtomSet::intersection(const AtomSet& other) const {
  AtomSet out;
  std::set_intersection(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
                        std::back_inserter(out.atoms_));
  return out;
}

std::size_t hash_value(const AtomSet& set) {
  std::size_t seed = set.size();
  for (const auto& atom : set) hash_combine(seed, hash_value(atom));
  return seed;
}

std::string to_string(const AtomSet& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : set) {
    if (!first) out += ", ";
    out += to_string(atom);
    first = false;
  }
  return out + "}";
}

std::string to_string(const State& s) { return to_string(s.atoms()); }

Goal::Goal(AtomSet positive, AtomSet negative) : positive_(std::move(positive)), negative_(std::move(negative)) {
  auto clash = positive_.intersection(negative_);
  if (!clash.empty()) throw InconsistentGoal("goal requires atoms both true and false: " + to_string(clash));
}

std::size_t GoalHash::operator()(const Goal& g) const {
  std::size_t seed = hash_value(g.positive());
  hash_combine(seed, hash_value(g.negative()) * 31);
  return seed;
}

std::string to_string(const Goal& g) {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : g.positive()) {
    if (!first) out += ", ";
    out += to_string(atom);
    first = false;
  }
  for (const auto& atom : g.negative()) {
    if (!first) out += ", ";
    out += "(not " + to_string(atom) + ")";
    first = false;
  }
  return out + "}";
}

std::string to_string(const ActionRef& ref) {
  std::string out = "(" + ref.name.text();
  for (Symbol a : ref.args) out += " " + a.text();
  return out + ")";
}

GroundAction::GroundAction(Symbol name, std::vector<Symbol> args, Parts parts)
    : ref_{name, std::move(args)}, parts_(std::move(parts)) {
  if (auto both = parts_.add.intersection(parts_.del); !both.empty()) {
    throw ModelError("action " + to_string(ref_) + " both adds and deletes " + to_string(both));
  }
  if (auto both = parts_.pre_pos.intersection(parts_.pre_neg); !both.empty()) {
    throw ModelError("action " + to_string(ref_) + " requires atoms both true and false: " + to_string(both));
  }
}

std::string to_string(const GroundAction& a) { return to_string(a.ref()); }

std::string to_string(const Plan& plan) {
  std::string out;
  for (const auto& step : plan) {
    if (!out.empty()) out += ' ';
    out += to_string(step);
  }
  return out;
}

bool applicable(const State& s, const GroundAction& a) {
  return s.atoms().includes(a.pre_pos()) && !s.atoms().intersects(a.pre_neg());
}

State apply(const State& s, const GroundAction& a) {
  if (!applicable(s, a)) throw NotApplicable("action " + to_string(a) + " is not applicable in " + to_string(s));
  return State(s.atoms().united(a.add()).minus(a.del()));
}

State apply_sequence(const State& s, std::span<const GroundAction> plan) {
  State current = s;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (!applicable(current, plan[i])) {
      throw NotApplicableAt(i, "step " + std::to_string(i) + " " + to_string(plan[i]) + " is not applicable");
    }
    current = apply(current, plan[i]);
  }
  return current;
}

bool satisfies(const State& s, const Goal& g) {
  return s.atoms().includes(g.positive()) && !s.atoms().intersects(g.negative());
}

bool relevant(const GroundAction& a, const Goal& g) {
  bool contributes = a.add().intersects(g.positive()) || a.del().intersects(g.negative());
  bool negates = a.del().intersects(g.positive()) || a.add().intersects(g.negative());
  return contributes && !negates;
}

Goal regress(const Goal& g, const GroundAction& a) {
  return Goal(g.positive().minus(a.add()).united(a.pre_pos()), g.negative().minus(a.del()).united(a.pre_neg()));
}

}  // namespace plankit
