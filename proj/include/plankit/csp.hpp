#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plankit/grounder.hpp"
#include "plankit/search.hpp"

namespace plankit::csp {

struct DecodeMismatch : PlanningError {
  using PlanningError::PlanningError;
};

enum class VariableKind { state, action };

/// Values are domain indices. A state variable has domain {false, true}
/// (0 and 1); an action variable ranges over the ground actions in
/// canonical order.
struct CspVariable {
  std::size_t id = 0;
  VariableKind kind = VariableKind::state;
  std::size_t step = 0;
  std::size_t fluent = 0;  // state variables only
  std::size_t domain_size = 2;
};

inline constexpr std::size_t kFalse = 0;
inline constexpr std::size_t kTrue = 1;

/// Explicit table of allowed tuples.
struct AllowedTuples {
  std::vector<std::vector<std::size_t>> tuples;
};
/// Unary: the variable must take `value`.
struct FixedValue {
  std::size_t value;
};
/// Over (a[i], x): if a[i] = action then x = value.
struct ActionImplies {
  std::size_t action;
  std::size_t value;
};
/// Over (a[i], x[i], x[i+1]): if a[i] = action then x[i+1] = x[i].
struct ActionFrame {
  std::size_t action;
};

using Relation = std::variant<AllowedTuples, FixedValue, ActionImplies, ActionFrame>;

enum class ConstraintRole { init, goal, precondition, effect, frame, other };

std::string_view to_string(ConstraintRole r);

struct Constraint {
  std::vector<std::size_t> scope;
  Relation relation;
  ConstraintRole role = ConstraintRole::other;

  bool allows(std::span<const std::size_t> values) const;
  /// Every allowed tuple, given the domain sizes of the scope.
  std::vector<std::vector<std::size_t>> enumerate(std::span<const std::size_t> domain_sizes) const;
};

struct CspInstance {
  std::size_t horizon = 0;
  std::vector<std::string> fluent_labels;
  std::vector<std::string> action_labels;
  std::vector<CspVariable> variables;
  std::vector<Constraint> constraints;

  std::size_t state_var(std::size_t fluent, std::size_t step) const;
  std::size_t action_var(std::size_t step) const;
  std::string value_label(std::size_t var, std::size_t value) const;
  std::string variable_label(std::size_t var) const;

  /// Throws ModelError when a constraint mentions an undeclared variable or
  /// an explicit tuple has the wrong arity or an out-of-domain value.
  void check() const;
};

struct Assignment {
  std::vector<std::optional<std::size_t>> values;

  Assignment() = default;
  explicit Assignment(std::size_t n) : values(n) {}
  bool complete() const;
};

/// Every constraint whose scope is fully assigned holds.
bool consistent(const CspInstance& c, const Assignment& a);
/// Number of constraints violated by a complete assignment.
std::size_t conflicts(const CspInstance& c, const Assignment& a);

/// Layout: layer i holds state variables i*(n+1)+j followed by the action
/// variable i*(n+1)+n; the last layer has state variables only, giving
/// (k+1)n + k variables. Init constraints sit at step 0 and goal constraints
/// at step k. Every step needs an action, so a solution is a plan of length
/// exactly k.
CspInstance encode(const ClassicalProblem& p, std::size_t k);

struct Domains {
  std::vector<std::vector<char>> alive;

  static Domains full(const CspInstance& c);
  bool contains(std::size_t var, std::size_t value) const { return alive[var][value] != 0; }
  std::size_t size(std::size_t var) const;
  std::vector<std::size_t> values(std::size_t var) const;
};

/// Prunes values of unassigned variables that, together with the current
/// partial assignment, violate a constraint shared with `just_assigned`.
/// Only constraints left with a single unassigned variable are revised.
/// Returns nullopt on a domain wipeout or a violated fully assigned
/// constraint.
std::optional<Domains> forward_check(const CspInstance& c, const Assignment& partial, const Domains& domains,
                                     std::size_t just_assigned);

struct Unsat {
  friend bool operator==(Unsat, Unsat) { return true; }
};

struct SolveStatistics {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
};

struct SolveResult {
  std::variant<Assignment, Unsat, BudgetExhausted> outcome;
  SolveStatistics stats;

  bool satisfiable() const { return std::holds_alternative<Assignment>(outcome); }
  bool unsat() const { return std::holds_alternative<Unsat>(outcome); }
  const Assignment& assignment() const { return std::get<Assignment>(outcome); }
};

/// Chronological backtracking in variable id order, which is time-layered
/// for encoded instances. Values are tried in domain order. With forward
/// checking, unary constraints are applied up front and each assignment is
/// followed by forward_check. `node_budget` bounds the number of value
/// assignments tried.
SolveResult solve_backtracking(const CspInstance& c, bool use_forward_checking = true,
                               std::uint64_t node_budget = UINT64_MAX);

struct Timeout {
  std::size_t best_conflicts = 0;
};

struct LocalSearchResult {
  std::variant<Assignment, Timeout> outcome;
  std::uint64_t steps = 0;

  bool solved() const { return std::holds_alternative<Assignment>(outcome); }
};

/// Min-conflicts local search from a seeded random complete assignment. Each
/// step picks a variable of a violated constraint at random and gives it the
/// value with the fewest conflicts, breaking ties at random; one step in ten
/// assigns a random value instead. Incomplete: Timeout says nothing about
/// satisfiability.
LocalSearchResult min_conflicts(const CspInstance& c, std::uint64_t max_steps, std::uint64_t seed);

/// The values of a[0..k-1]. Throws DecodeMismatch if the plan fails to
/// replay from I or misses the goal.
Plan decode_plan(const CspInstance& c, const Assignment& a, const ClassicalProblem& p);

enum class Method { backtracking, min_conflicts };

struct BoundedOptions {
  Method method = Method::backtracking;
  bool forward_checking = true;
  std::uint64_t node_budget = 10'000'000;  // per horizon, backtracking only
  std::uint64_t max_steps = 100'000;       // per horizon, min-conflicts only
  std::uint64_t seed = 0;
};

/// Tries k = 0, 1, ..., k_max and returns the plan of the first satisfiable
/// horizon. Unsolvable means no plan of length <= k_max exists. With
/// min-conflicts a failure at every horizon is reported as BudgetExhausted.
/// stats.expanded counts solver nodes (or local search steps).
SearchResult plan_bounded(const ClassicalProblem& p, std::size_t k_max, const BoundedOptions& options = {});

/// Plain-text listing: one line per variable, then one line per constraint
/// with its allowed tuples as domain indices.
std::string export_listing(const CspInstance& c);

}  // namespace plankit::csp
