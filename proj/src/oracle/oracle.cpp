#include "plankit/oracle.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "plankit/loader.hpp"

namespace plankit::oracle {

std::optional<std::size_t> StateGraph::find(const State& s) const {
  auto it = index.find(s);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

bool StateGraph::has_edge(const State& from, const State& to) const {
  auto f = find(from), t = find(to);
  if (!f || !t) return false;
  return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.from == *f && e.to == *t; });
}

StateGraph build_state_graph(const ClassicalProblem& p, GraphMode mode, std::size_t max_fluents) {
  const auto& fluents = p.fluents();
  if (fluents.size() > max_fluents) {
    throw TooLarge(std::to_string(fluents.size()) + " fluents exceed the oracle limit of " + std::to_string(max_fluents));
  }
  StateGraph g;
  g.reachable_only = mode == GraphMode::reachable;
  auto add = [&](State s) {
    auto [it, fresh] = g.index.emplace(s, g.vertices.size());
    if (fresh) g.vertices.push_back(std::move(s));
    return std::pair{it->second, fresh};
  };

  if (mode == GraphMode::full) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fluents.size()); ++mask) {
      std::vector<GroundAtom> atoms;
      for (std::size_t j = 0; j < fluents.size(); ++j) {
        if (mask >> j & 1) atoms.push_back(fluents[j]);
      }
      add(State(AtomSet(std::move(atoms))));
    }
  }
  g.initial = add(p.init()).first;

  // Expand in vertex order; in reachable mode new vertices are appended and
  // picked up by the same loop.
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    for (std::size_t a = 0; a < p.actions().size(); ++a) {
      if (!applicable(g.vertices[v], p.actions()[a])) continue;
      std::size_t to = add(apply(g.vertices[v], p.actions()[a])).first;
      g.edges.push_back({v, a, to});
    }
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (satisfies(g.vertices[v], p.goal())) g.goals.push_back(v);
  }
  return g;
}

std::vector<std::optional<std::size_t>> distances(const StateGraph& g) {
  std::vector<std::vector<std::size_t>> out(g.vertices.size());
  for (const auto& e : g.edges) out[e.from].push_back(e.to);
  std::vector<std::optional<std::size_t>> dist(g.vertices.size());
  std::deque<std::size_t> queue{g.initial};
  dist[g.initial] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (auto w : out[v]) {
      if (dist[w]) continue;
      dist[w] = *dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

std::optional<std::size_t> shortest_solving_trajectory(const StateGraph& g) {
  auto dist = distances(g);
  std::optional<std::size_t> best;
  for (auto v : g.goals) {
    if (dist[v] && (!best || *dist[v] < *best)) best = dist[v];
  }
  return best;
}

std::size_t eccentricity(const StateGraph& g) {
  std::size_t out = 0;
  for (const auto& d : distances(g)) {
    if (d) out = std::max(out, *d);
  }
  return out;
}

std::vector<Fixture> load_manifest(const std::filesystem::path& manifest) {
  std::istringstream in(read_file(manifest));
  auto dir = manifest.parent_path();
  std::vector<Fixture> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, kind, domain, problem, extra;
    if (!(fields >> name)) continue;
    if (!(fields >> kind >> domain >> problem) || (fields >> extra) || (kind != "classical" && kind != "htn")) {
      throw PlanningError(manifest.string() + ":" + std::to_string(lineno) +
                          ": expected 'name classical|htn domain problem'");
    }
    out.push_back({name, kind == "htn", dir / domain, dir / problem});
  }
  return out;
}

std::string expected_report(const std::vector<Fixture>& fixtures) {
  std::ostringstream out;
  for (const auto& f : fixtures) {
    if (f.htn) continue;
    ClassicalProblem p = load_classical(f.domain, f.problem);
    out << f.name << " fluents=" << p.fluents().size() << " actions=" << p.actions().size();
    try {
      StateGraph g = build_state_graph(p, GraphMode::reachable);
      auto optimal = shortest_solving_trajectory(g);
      out << " reachable=" << g.vertices.size() << " optimal=" << (optimal ? std::to_string(*optimal) : "none")
          << " eccentricity=" << eccentricity(g) << "\n";
    } catch (const TooLarge&) {
      out << " oracle=too-large\n";
    }
  }
  return out.str();
}

}  // namespace plankit::oracle
