#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "plankit/grounder.hpp"

namespace plankit::oracle {

struct TooLarge : PlanningError {
  using PlanningError::PlanningError;
};

enum class GraphMode { full, reachable };

/// Explicit transition graph. Vertex 0 is not special; `initial` marks I.
struct StateGraph {
  struct Edge {
    std::size_t from;
    std::size_t action;  // index into the problem's actions
    std::size_t to;
  };

  std::vector<State> vertices;
  std::vector<Edge> edges;
  std::size_t initial = 0;
  std::vector<std::size_t> goals;  // vertices satisfying G, ascending
  bool reachable_only = false;

  std::optional<std::size_t> find(const State& s) const;
  bool has_edge(const State& from, const State& to) const;

  std::unordered_map<State, std::size_t, StateHash> index;
};

/// Every state over F (mode full, 2^|F| vertices) or those reachable from I,
/// with one edge per applicable (state, action). Throws TooLarge above
/// `max_fluents` fluents.
StateGraph build_state_graph(const ClassicalProblem& p, GraphMode mode = GraphMode::full, std::size_t max_fluents = 16);

/// BFS distance from I to every vertex; nullopt where unreachable.
std::vector<std::optional<std::size_t>> distances(const StateGraph& g);

/// Length of the shortest solving trajectory, or nullopt.
std::optional<std::size_t> shortest_solving_trajectory(const StateGraph& g);

/// Largest finite BFS distance from I. Any plan that exists is no longer
/// than this, so it bounds iterative deepening.
std::size_t eccentricity(const StateGraph& g);

struct Fixture {
  std::string name;
  bool htn = false;
  std::filesystem::path domain;
  std::filesystem::path problem;
};

/// Reads `name classical|htn domain problem` lines; `#` starts a comment.
/// Paths are relative to the manifest's directory.
std::vector<Fixture> load_manifest(const std::filesystem::path& manifest);

/// One line per classical fixture with its size and the oracle's verdict:
/// `name fluents=N actions=M reachable=R optimal=L eccentricity=E`, with
/// `optimal=none` when unsolvable.
std::string expected_report(const std::vector<Fixture>& fixtures);

}  // namespace plankit::oracle
