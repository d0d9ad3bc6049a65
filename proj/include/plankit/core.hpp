#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "plankit/symbol.hpp"

namespace plankit {

struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a ground action violates its own well-formedness rules
/// (add/delete overlap, contradictory preconditions).
struct ModelError : PlanningError {
  using PlanningError::PlanningError;
};

struct NotApplicable : PlanningError {
  using PlanningError::PlanningError;
};

struct NotApplicableAt : PlanningError {
  NotApplicableAt(std::size_t index, const std::string& what) : PlanningError(what), index(index) {}
  std::size_t index;
};

struct InconsistentGoal : PlanningError {
  using PlanningError::PlanningError;
};

struct GroundAtom {
  Symbol predicate;
  std::vector<Symbol> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

GroundAtom make_atom(std::string_view predicate, std::initializer_list<std::string_view> args = {});
std::string to_string(const GroundAtom& atom);
std::ostream& operator<<(std::ostream& os, const GroundAtom& atom);
std::size_t hash_value(const GroundAtom& atom);

/// Sorted, duplicate-free set of ground atoms with value semantics.
class AtomSet {
public:
  AtomSet() = default;
  AtomSet(std::vector<GroundAtom> atoms);
  AtomSet(std::initializer_list<GroundAtom> atoms) : AtomSet(std::vector<GroundAtom>(atoms)) {}

  bool contains(const GroundAtom& atom) const;
  bool includes(const AtomSet& other) const;    // other ⊆ *this
  bool intersects(const AtomSet& other) const;  // *this ∩ other ≠ ∅
  AtomSet united(const AtomSet& other) const;
  AtomSet minus(const AtomSet& other) const;
  AtomSet intersection(const AtomSet& other) const;

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
  friend auto operator<=>(const AtomSet&, const AtomSet&) = default;

private:
  std::vector<GroundAtom> atoms_;
};

std::size_t hash_value(const AtomSet& set);
std::string to_string(const AtomSet& set);

/// A state under the closed-world assumption: atoms absent from the set are false.
class State {
public:
  State() = default;
  explicit State(AtomSet atoms) : atoms_(std::move(atoms)) {}
  State(std::initializer_list<GroundAtom> atoms) : atoms_(atoms) {}

  const AtomSet& atoms() const { return atoms_; }
  bool holds(const GroundAtom& atom) const { return atoms_.contains(atom); }
  std::size_t size() const { return atoms_.size(); }

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;

private:
  AtomSet atoms_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return hash_value(s.atoms()); }
};

std::string to_string(const State& s);

/// Conjunction of positive and negative literals. Throws InconsistentGoal
/// when an atom is required both true and false.
class Goal {
public:
  Goal() = default;
  Goal(AtomSet positive, AtomSet negative);

  const AtomSet& positive() const { return positive_; }
  const AtomSet& negative() const { return negative_; }
  std::size_t size() const { return positive_.size() + negative_.size(); }
  bool empty() const { return positive_.empty() && negative_.empty(); }

  friend bool operator==(const Goal&, const Goal&) = default;
  friend auto operator<=>(const Goal&, const Goal&) = default;

private:
  AtomSet positive_;
  AtomSet negative_;
};

struct GoalHash {
  std::size_t operator()(const Goal& g) const;
};

std::string to_string(const Goal& g);

/// Reference to a ground action by name and arguments, as written in plan files.
struct ActionRef {
  Symbol name;
  std::vector<Symbol> args;

  friend bool operator==(const ActionRef&, const ActionRef&) = default;
  friend auto operator<=>(const ActionRef&, const ActionRef&) = default;
};

std::string to_string(const ActionRef& ref);

class GroundAction {
public:
  struct Parts {
    AtomSet pre_pos, pre_neg, add, del;
  };

  GroundAction() = default;
  GroundAction(Symbol name, std::vector<Symbol> args, Parts parts);

  Symbol name() const { return ref_.name; }
  const std::vector<Symbol>& args() const { return ref_.args; }
  const ActionRef& ref() const { return ref_; }
  const AtomSet& pre_pos() const { return parts_.pre_pos; }
  const AtomSet& pre_neg() const { return parts_.pre_neg; }
  const AtomSet& add() const { return parts_.add; }
  const AtomSet& del() const { return parts_.del; }

  friend bool operator==(const GroundAction& a, const GroundAction& b) {
    return a.ref_ == b.ref_ && a.parts_.pre_pos == b.parts_.pre_pos && a.parts_.pre_neg == b.parts_.pre_neg &&
           a.parts_.add == b.parts_.add && a.parts_.del == b.parts_.del;
  }

private:
  ActionRef ref_;
  Parts parts_;
};

std::string to_string(const GroundAction& a);

using Plan = std::vector<GroundAction>;

std::string to_string(const Plan& plan);

bool applicable(const State& s, const GroundAction& a);

/// Successor state (s ∪ add) ∖ del. Throws NotApplicable.
State apply(const State& s, const GroundAction& a);

/// Left fold of apply. Throws NotApplicableAt with the index of the first
/// inapplicable step.
State apply_sequence(const State& s, std::span<const GroundAction> plan);

bool satisfies(const State& s, const Goal& g);

/// The action achieves part of the goal and negates none of it.
bool relevant(const GroundAction& a, const Goal& g);

/// Goal that must hold before `a` so that `g` holds after it.
/// Throws InconsistentGoal when the result requires an atom both true and false.
Goal regress(const Goal& g, const GroundAction& a);

}  // namespace plankit
