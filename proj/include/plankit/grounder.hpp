#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/pddl/linker.hpp"
#include "plankit/pddl/unify.hpp"

namespace plankit {

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const { return hash_value(a); }
};

struct GroundingBudgetExceeded : PlanningError {
  using PlanningError::PlanningError;
};

struct GoalUsesUnknownObject : PlanningError {
  using PlanningError::PlanningError;
};

/// The ground tuple ⟨F, O, I, G⟩. Fluents and actions keep the canonical
/// order produced by the grounder; every engine iterates in this order.
class ClassicalProblem {
public:
  ClassicalProblem() = default;
  /// Throws ModelError if I, an action, or the goal mentions an atom outside
  /// `fluents`, or if two actions share name and arguments.
  ClassicalProblem(std::vector<GroundAtom> fluents, std::vector<GroundAction> actions, State init, Goal goal);

  const std::vector<GroundAtom>& fluents() const { return fluents_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const State& init() const { return init_; }
  const Goal& goal() const { return goal_; }

  std::optional<std::size_t> find_action(const ActionRef& ref) const;
  std::optional<std::size_t> fluent_index(const GroundAtom& atom) const;

  ClassicalProblem with_goal(Goal goal) const { return ClassicalProblem(fluents_, actions_, init_, std::move(goal)); }

private:
  std::vector<GroundAtom> fluents_;
  std::vector<GroundAction> actions_;
  State init_;
  Goal goal_;
  std::unordered_map<GroundAtom, std::size_t, GroundAtomHash> fluent_index_;
  std::map<ActionRef, std::size_t> action_index_;
};

struct GroundingOptions {
  std::uint64_t instance_budget = 1'000'000;
  bool prune_statics = true;
};

/// Visits every tuple of the Cartesian product of `lists`, last position
/// varying fastest. Visits nothing if a list is empty and one empty tuple if
/// there are no lists.
template <typename Fn>
void for_each_tuple(const std::vector<std::vector<Symbol>>& lists, Fn&& fn) {
  for (const auto& l : lists) {
    if (l.empty()) return;
  }
  std::vector<std::size_t> odometer(lists.size(), 0);
  std::vector<Symbol> tuple(lists.size());
  while (true) {
    for (std::size_t i = 0; i < lists.size(); ++i) tuple[i] = lists[i][odometer[i]];
    fn(tuple);
    std::size_t pos = lists.size();
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < lists[pos].size()) break;
      odometer[pos] = 0;
      if (pos == 0) return;
    }
    if (lists.empty()) return;
  }
}

/// Objects whose type is `type` or a descendant, in declaration order.
std::vector<Symbol> objects_of_type(Symbol type, const pddl::LinkedProblem& problem);

/// Product of the per-parameter object counts, computed without
/// instantiating anything. Saturates at UINT64_MAX.
std::uint64_t count_groundings(std::span<const std::uint64_t> objects_per_parameter);
std::uint64_t count_groundings(const pddl::ActionSchema& schema, const pddl::LinkedProblem& problem);

/// Instantiates the schema under a complete binding of its parameters.
/// When parameter aliasing makes one atom both added and deleted, the add
/// wins (delete-then-add). Returns nullopt when aliasing makes the
/// preconditions contradictory, since such an instance can never apply.
std::optional<GroundAction> instantiate(const pddl::ActionSchema& schema, const pddl::Binding& binding);

/// One ground action per tuple of the Cartesian product of the parameters'
/// typed object lists, first parameter varying slowest. Throws
/// GroundingBudgetExceeded when the product exceeds `budget`.
std::vector<GroundAction> ground_schema(const pddl::ActionSchema& schema, const pddl::LinkedProblem& problem,
                                        std::uint64_t budget = GroundingOptions{}.instance_budget);

/// F = every type-correct atom over the declared predicates, in predicate
/// declaration order; O = all ground schemas, ordered by schema name and then
/// by argument tuple in object declaration order; I and G from the linked
/// problem.
ClassicalProblem build_problem(const pddl::LinkedProblem& problem, const GroundingOptions& options = {});

/// Drops actions whose static preconditions (atoms no action adds or
/// deletes) are false in I. Reachable states are unchanged.
ClassicalProblem prune_statics(const ClassicalProblem& problem);

}  // namespace plankit
