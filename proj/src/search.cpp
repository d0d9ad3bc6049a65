#include "plankit/search.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace plankit {

std::string_view to_string(Strategy s) { return s == Strategy::dfs ? "dfs" : "bfs"; }

void SearchConfig::validate() const {
  if (max_depth == 0) throw std::invalid_argument("max_depth must be positive");
  if (node_budget == 0) throw std::invalid_argument("node_budget must be positive");
}

std::vector<std::size_t> applicable_actions(const State& s, const ClassicalProblem& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.actions().size(); ++i) {
    if (applicable(s, p.actions()[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> relevant_actions(const Goal& g, const ClassicalProblem& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.actions().size(); ++i) {
    if (relevant(p.actions()[i], g)) out.push_back(i);
  }
  return out;
}

namespace {

template <typename Node>
struct Edge {
  std::size_t action;
  Node node;
};

/// Blind search over an implicit graph. `expand` lists (action, successor)
/// pairs in canonical order; the returned action sequence is the path from
/// the root.
template <typename Node, typename Hash, typename IsGoal, typename Expand>
class Searcher {
public:
  Searcher(const SearchConfig& c, IsGoal is_goal, Expand expand) : c_(c), is_goal_(is_goal), expand_(expand) {}

  std::variant<std::vector<std::size_t>, Unsolvable, BudgetExhausted> run(const Node& root) {
    c_.validate();
    if (is_goal_(root)) return std::vector<std::size_t>{};
    return c_.strategy == Strategy::dfs ? dfs(root) : bfs(root);
  }

  const SearchStatistics& stats() const { return stats_; }

private:
  std::vector<Edge<Node>> expand(const Node& n) {
    ++stats_.expanded;
    auto succ = expand_(n);
    stats_.generated += succ.size();
    return succ;
  }

  std::variant<std::vector<std::size_t>, Unsolvable, BudgetExhausted> dfs(const Node& root) {
    struct Frame {
      std::size_t via;  // action leading into this frame's node
      std::vector<Edge<Node>> succ;
      std::size_t next = 0;
    };
    std::unordered_set<Node, Hash> visited;
    bool cut = false;
    if (c_.cycle_checking) visited.insert(root);
    std::vector<Frame> stack;
    stack.push_back({0, expand(root)});
    while (!stack.empty()) {
      stats_.max_frontier = std::max(stats_.max_frontier, stack.size());
      Frame& top = stack.back();
      if (top.next == top.succ.size()) {
        stack.pop_back();
        continue;
      }
      Edge<Node> edge = std::move(top.succ[top.next++]);
      if (c_.cycle_checking && visited.count(edge.node)) continue;
      std::size_t depth = stack.size();  // depth of edge.node
      if (is_goal_(edge.node)) {
        std::vector<std::size_t> path;
        for (std::size_t i = 1; i < stack.size(); ++i) path.push_back(stack[i].via);
        path.push_back(edge.action);
        return path;
      }
      if (c_.max_depth != SearchConfig::unlimited && depth >= c_.max_depth) {
        cut = true;
        continue;
      }
      if (stats_.expanded >= c_.node_budget) return BudgetExhausted{};
      if (c_.cycle_checking) visited.insert(edge.node);
      auto succ = expand(edge.node);
      stack.push_back({edge.action, std::move(succ)});
    }
    if (cut) return BudgetExhausted{};
    return Unsolvable{};
  }

  std::variant<std::vector<std::size_t>, Unsolvable, BudgetExhausted> bfs(const Node& root) {
    struct Record {
      std::size_t parent;
      std::size_t action;
      std::size_t depth;
    };
    std::vector<Record> records{{0, 0, 0}};
    std::vector<Node> nodes{root};
    std::deque<std::size_t> queue{0};
    std::unordered_set<Node, Hash> visited;
    if (c_.cycle_checking) visited.insert(root);
    bool cut = false;

    auto path_to = [&](std::size_t id) {
      std::vector<std::size_t> path;
      for (; id != 0; id = records[id].parent) path.push_back(records[id].action);
      std::reverse(path.begin(), path.end());
      return path;
    };

    while (!queue.empty()) {
      stats_.max_frontier = std::max(stats_.max_frontier, queue.size());
      std::size_t id = queue.front();
      queue.pop_front();
      if (c_.max_depth != SearchConfig::unlimited && records[id].depth >= c_.max_depth) {
        cut = true;
        continue;
      }
      if (stats_.expanded >= c_.node_budget) return BudgetExhausted{};
      auto succ = expand(nodes[id]);
      for (auto& edge : succ) {
        if (c_.cycle_checking && !visited.insert(edge.node).second) continue;
        records.push_back({id, edge.action, records[id].depth + 1});
        nodes.push_back(std::move(edge.node));
        std::size_t child = nodes.size() - 1;
        if (is_goal_(nodes[child])) return path_to(child);
        queue.push_back(child);
      }
    }
    if (cut) return BudgetExhausted{};
    return Unsolvable{};
  }

  const SearchConfig& c_;
  IsGoal is_goal_;
  Expand expand_;
  SearchStatistics stats_;
};

template <typename Node, typename Hash, typename IsGoal, typename Expand>
SearchResult search(const ClassicalProblem& p, const SearchConfig& c, const Node& root, IsGoal is_goal, Expand expand,
                    bool reverse_plan) {
  auto start = std::chrono::steady_clock::now();
  Searcher<Node, Hash, IsGoal, Expand> searcher(c, is_goal, expand);
  auto found = searcher.run(root);
  SearchResult result{Unsolvable{}, searcher.stats()};
  if (auto* path = std::get_if<std::vector<std::size_t>>(&found)) {
    if (reverse_plan) std::reverse(path->begin(), path->end());
    Plan plan;
    for (std::size_t a : *path) plan.push_back(p.actions()[a]);
    result.outcome = std::move(plan);
  } else if (std::holds_alternative<BudgetExhausted>(found)) {
    result.outcome = BudgetExhausted{};
  }
  result.stats.duration = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace

SearchResult forward_search(const ClassicalProblem& p, const SearchConfig& c) {
  auto is_goal = [&](const State& s) { return satisfies(s, p.goal()); };
  auto expand = [&](const State& s) {
    std::vector<Edge<State>> out;
    for (std::size_t a : applicable_actions(s, p)) out.push_back({a, apply(s, p.actions()[a])});
    return out;
  };
  return search<State, StateHash>(p, c, p.init(), is_goal, expand, false);
}

SearchResult backward_search(const ClassicalProblem& p, const SearchConfig& c) {
  auto is_goal = [&](const Goal& g) { return satisfies(p.init(), g); };
  auto expand = [&](const Goal& g) {
    std::vector<Edge<Goal>> out;
    for (std::size_t a : relevant_actions(g, p)) {
      try {
        out.push_back({a, regress(g, p.actions()[a])});
      } catch (const InconsistentGoal&) {
        // No state satisfies the regressed goal.
      }
    }
    return out;
  };
  return search<Goal, GoalHash>(p, c, p.goal(), is_goal, expand, true);
}

}  // namespace plankit
