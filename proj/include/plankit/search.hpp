#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/grounder.hpp"

namespace plankit {

enum class Strategy { dfs, bfs };

std::string_view to_string(Strategy s);

struct SearchConfig {
  static constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

  Strategy strategy = Strategy::dfs;
  std::size_t max_depth = unlimited;
  std::size_t node_budget = 1'000'000;
  bool cycle_checking = true;

  /// Throws std::invalid_argument if a budget is zero.
  void validate() const;
};

struct SearchStatistics {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t max_frontier = 0;
  std::chrono::nanoseconds duration{0};
};

struct Unsolvable {
  friend bool operator==(Unsolvable, Unsolvable) { return true; }
};
struct BudgetExhausted {
  friend bool operator==(BudgetExhausted, BudgetExhausted) { return true; }
};

using SearchOutcome = std::variant<Plan, Unsolvable, BudgetExhausted>;

struct SearchResult {
  SearchOutcome outcome;
  SearchStatistics stats;

  bool solved() const { return std::holds_alternative<Plan>(outcome); }
  const Plan& plan() const { return std::get<Plan>(outcome); }
  bool unsolvable() const { return std::holds_alternative<Unsolvable>(outcome); }
  bool budget_exhausted() const { return std::holds_alternative<BudgetExhausted>(outcome); }
};

/// Actions applicable in `s`, in the problem's canonical order.
std::vector<std::size_t> applicable_actions(const State& s, const ClassicalProblem& p);

/// Actions relevant to `g`, in the problem's canonical order.
std::vector<std::size_t> relevant_actions(const Goal& g, const ClassicalProblem& p);

/// Progression search from I. The non-deterministic choice of the textbook
/// algorithm becomes backtracking over applicable actions in canonical order
/// (dfs) or a FIFO frontier (bfs, shortest plans). With cycle checking a
/// state is expanded at most once.
///
/// Unsolvable means the reachable space was exhausted; hitting the node
/// budget or cutting a branch at max_depth yields BudgetExhausted instead.
SearchResult forward_search(const ClassicalProblem& p, const SearchConfig& c = {});

/// Regression search from G: relevant actions are prepended to the plan and
/// the goal is regressed through them until I satisfies it. Cycle checking
/// is over exact goal sets.
SearchResult backward_search(const ClassicalProblem& p, const SearchConfig& c = {});

}  // namespace plankit
