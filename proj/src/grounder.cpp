#include "plankit/grounder.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace plankit {

using pddl::ActionSchema;
using pddl::Binding;
using pddl::LinkedProblem;

ClassicalProblem::ClassicalProblem(std::vector<GroundAtom> fluents, std::vector<GroundAction> actions, State init,
                                   Goal goal)
    : fluents_(std::move(fluents)), actions_(std::move(actions)), init_(std::move(init)), goal_(std::move(goal)) {
  for (std::size_t i = 0; i < fluents_.size(); ++i) {
    if (!fluent_index_.emplace(fluents_[i], i).second) throw ModelError("duplicate fluent " + to_string(fluents_[i]));
  }
  auto require = [&](const AtomSet& atoms, const std::string& where) {
    for (const auto& a : atoms) {
      if (!fluent_index_.count(a)) throw ModelError(where + " mentions " + to_string(a) + ", which is not a fluent");
    }
  };
  require(init_.atoms(), "initial state");
  require(goal_.positive(), "goal");
  require(goal_.negative(), "goal");
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    const auto& a = actions_[i];
    std::string where = "action " + to_string(a);
    require(a.pre_pos(), where);
    require(a.pre_neg(), where);
    require(a.add(), where);
    require(a.del(), where);
    if (!action_index_.emplace(a.ref(), i).second) throw ModelError("duplicate action " + to_string(a));
  }
}

std::optional<std::size_t> ClassicalProblem::find_action(const ActionRef& ref) const {
  auto it = action_index_.find(ref);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ClassicalProblem::fluent_index(const GroundAtom& atom) const {
  auto it = fluent_index_.find(atom);
  if (it == fluent_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::vector<Symbol>> parameter_objects(const std::vector<pddl::TypedName>& params,
                                                   const LinkedProblem& problem) {
  std::vector<std::vector<Symbol>> lists;
  lists.reserve(params.size());
  for (const auto& p : params) lists.push_back(objects_of_type(p.type, problem));
  return lists;
}

}  // namespace

std::vector<Symbol> objects_of_type(Symbol type, const LinkedProblem& problem) {
  std::vector<Symbol> out;
  for (const auto& o : problem.objects) {
    if (problem.types.is_subtype(o.type, type)) out.push_back(o.name);
  }
  return out;
}

std::uint64_t count_groundings(std::span<const std::uint64_t> objects_per_parameter) {
  std::uint64_t total = 1;
  for (std::uint64_t n : objects_per_parameter) {
    if (n == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    total *= n;
  }
  return total;
}

std::uint64_t count_groundings(const ActionSchema& schema, const LinkedProblem& problem) {
  std::vector<std::uint64_t> counts;
  for (const auto& p : schema.params) counts.push_back(objects_of_type(p.type, problem).size());
  return count_groundings(counts);
}

std::optional<GroundAction> instantiate(const ActionSchema& schema, const Binding& binding) {
  std::vector<GroundAtom> pre_pos, pre_neg, add, del;
  for (const auto& l : schema.precondition) (l.positive ? pre_pos : pre_neg).push_back(pddl::substitute(l.atom, binding));
  for (const auto& l : schema.effect) (l.positive ? add : del).push_back(pddl::substitute(l.atom, binding));
  GroundAction::Parts parts{AtomSet(std::move(pre_pos)), AtomSet(std::move(pre_neg)), AtomSet(std::move(add)),
                            AtomSet(std::move(del))};
  if (parts.pre_pos.intersects(parts.pre_neg)) return std::nullopt;
  parts.del = parts.del.minus(parts.add);
  std::vector<Symbol> args;
  for (const auto& p : schema.params) {
    auto v = binding.get(p.name);
    if (!v) throw PlanningError("parameter " + p.name.text() + " of " + schema.name.text() + " is unbound");
    args.push_back(*v);
  }
  return GroundAction(schema.name, std::move(args), std::move(parts));
}

std::vector<GroundAction> ground_schema(const ActionSchema& schema, const LinkedProblem& problem, std::uint64_t budget) {
  auto lists = parameter_objects(schema.params, problem);
  std::vector<std::uint64_t> counts;
  for (const auto& l : lists) counts.push_back(l.size());
  std::uint64_t total = count_groundings(counts);
  if (total > budget) {
    throw GroundingBudgetExceeded("schema '" + schema.name.text() + "' has " + std::to_string(total) +
                                  " instances, above the budget of " + std::to_string(budget));
  }
  std::vector<GroundAction> out;
  out.reserve(total);
  for_each_tuple(lists, [&](const std::vector<Symbol>& tuple) {
    Binding b;
    for (std::size_t i = 0; i < tuple.size(); ++i) b.bind(schema.params[i].name, tuple[i]);
    if (auto a = instantiate(schema, b)) out.push_back(std::move(*a));
  });
  return out;
}

ClassicalProblem build_problem(const LinkedProblem& problem, const GroundingOptions& options) {
  const auto& domain = *problem.domain;
  std::uint64_t remaining = options.instance_budget;

  std::vector<GroundAtom> fluents;
  std::unordered_set<Symbol> seen_predicates;
  for (const auto& pred : domain.predicates) {
    if (!seen_predicates.insert(pred.name).second) continue;  // identical duplicate declaration
    auto lists = parameter_objects(pred.params, problem);
    std::vector<std::uint64_t> counts;
    for (const auto& l : lists) counts.push_back(l.size());
    std::uint64_t n = count_groundings(counts);
    if (n > remaining) {
      throw GroundingBudgetExceeded("predicate '" + pred.name.text() + "' has " + std::to_string(n) +
                                    " ground atoms, above the remaining budget of " + std::to_string(remaining));
    }
    remaining -= n;
    for_each_tuple(lists, [&](const std::vector<Symbol>& tuple) { fluents.push_back(GroundAtom{pred.name, tuple}); });
  }

  // Canonical order: schemas by name, then argument tuples in object
  // declaration order.
  std::vector<const ActionSchema*> schemas;
  for (const auto& schema : domain.actions) schemas.push_back(&schema);
  std::stable_sort(schemas.begin(), schemas.end(),
                   [](const ActionSchema* a, const ActionSchema* b) { return a->name.text() < b->name.text(); });

  std::vector<GroundAction> actions;
  for (const ActionSchema* s : schemas) {
    const auto& schema = *s;
    std::uint64_t n = count_groundings(schema, problem);
    if (n > remaining) {
      throw GroundingBudgetExceeded("schema '" + schema.name.text() + "' has " + std::to_string(n) +
                                    " instances, above the remaining budget of " + std::to_string(remaining));
    }
    remaining -= n;
    auto ground = ground_schema(schema, problem, n);
    actions.insert(actions.end(), std::make_move_iterator(ground.begin()), std::make_move_iterator(ground.end()));
  }

  std::unordered_set<GroundAtom, GroundAtomHash> known(fluents.begin(), fluents.end());
  auto check_goal = [&](const AtomSet& atoms) {
    for (const auto& a : atoms) {
      if (!known.count(a)) throw GoalUsesUnknownObject("goal atom " + to_string(a) + " is not a well-typed atom of the problem");
    }
  };
  check_goal(problem.goal.positive());
  check_goal(problem.goal.negative());

  ClassicalProblem out(std::move(fluents), std::move(actions), State(AtomSet(problem.init)), problem.goal);
  return options.prune_statics ? prune_statics(out) : out;
}

ClassicalProblem prune_statics(const ClassicalProblem& problem) {
  std::unordered_set<GroundAtom, GroundAtomHash> changing;
  for (const auto& a : problem.actions()) {
    changing.insert(a.add().begin(), a.add().end());
    changing.insert(a.del().begin(), a.del().end());
  }
  const State& init = problem.init();
  std::vector<GroundAction> kept;
  for (const auto& a : problem.actions()) {
    bool possible = true;
    for (const auto& p : a.pre_pos()) {
      if (!changing.count(p) && !init.holds(p)) possible = false;
    }
    for (const auto& p : a.pre_neg()) {
      if (!changing.count(p) && init.holds(p)) possible = false;
    }
    if (possible) kept.push_back(a);
  }
  return ClassicalProblem(problem.fluents(), std::move(kept), problem.init(), problem.goal());
}

}  // namespace plankit
