#include <map>

#include "doctest.h"
#include "plankit/oracle.hpp"
#include "support.hpp"

using namespace plankit;
using namespace plankit::oracle;
namespace ts = testing_support;

namespace {

State keys_state(bool in, bool keys, bool open) {
  std::vector<GroundAtom> atoms;
  if (in) atoms.push_back(make_atom("in"));
  if (keys) atoms.push_back(make_atom("keys"));
  if (open) atoms.push_back(make_atom("open"));
  return State(AtomSet(std::move(atoms)));
}

}  // namespace

TEST_CASE("keys state graph") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto g = build_state_graph(p);
  CHECK(g.vertices.size() == 8);
  CHECK_FALSE(g.reachable_only);

  // Edge count against an independent enumeration of applicable pairs.
  auto bits = ts::compile(p);
  std::size_t pairs = 0;
  for (std::uint32_t s = 0; s < 8; ++s) {
    for (const auto& o : bits.ops) pairs += bits.applicable(s, o);
  }
  CHECK(g.edges.size() == pairs);
  CHECK(g.edges.size() == 12);

  // Every transition has an inverse, so the arrows are double-headed.
  for (const auto& e : g.edges) CHECK(g.has_edge(g.vertices[e.to], g.vertices[e.from]));

  CHECK(g.has_edge(keys_state(true, false, false), keys_state(true, true, false)));
  CHECK(g.has_edge(keys_state(true, true, true), keys_state(false, true, true)));
  CHECK_FALSE(g.has_edge(keys_state(true, false, false), keys_state(true, false, true)));
  CHECK_FALSE(g.has_edge(keys_state(true, true, true), keys_state(false, false, true)));

  for (const auto& e : g.edges) {
    const auto& a = p.actions()[e.action];
    REQUIRE(applicable(g.vertices[e.from], a));
    CHECK(apply(g.vertices[e.from], a) == g.vertices[e.to]);
  }
}

TEST_CASE("reachable graph and distances") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto g = build_state_graph(p, GraphMode::reachable);
  CHECK(g.reachable_only);
  CHECK(g.vertices.size() == ts::compile(p).reachable().size());
  auto d = distances(g);
  CHECK(d[g.initial] == std::optional<std::size_t>(0));
  CHECK(shortest_solving_trajectory(g) == std::optional<std::size_t>(3));
  CHECK(eccentricity(g) == 4);

  // Both goal states, open and locked, count.
  CHECK(build_state_graph(p).goals.size() == 2);

  auto p2 = ts::load("keys.pddl", "keys-p2.pddl");
  CHECK(shortest_solving_trajectory(build_state_graph(p2)) == std::optional<std::size_t>(4));

  auto done = p.with_goal(Goal({make_atom("in")}, {}));
  CHECK(shortest_solving_trajectory(build_state_graph(done)) == std::optional<std::size_t>(0));

  auto nokey = ts::load("keys-nokey.pddl", "keys-nokey-p1.pddl");
  CHECK_FALSE(shortest_solving_trajectory(build_state_graph(nokey)).has_value());
}

TEST_CASE("no fluents") {
  ClassicalProblem empty({}, {}, State{}, Goal{});
  auto g = build_state_graph(empty);
  CHECK(g.vertices.size() == 1);
  CHECK(g.edges.empty());
  CHECK(shortest_solving_trajectory(g) == std::optional<std::size_t>(0));
}

TEST_CASE("size guard") {
  auto p = ts::load("smart-home.pddl", "smart-home-p1.pddl");
  CHECK_THROWS_AS(build_state_graph(p), TooLarge);
  CHECK_THROWS_AS(build_state_graph(p, GraphMode::reachable), TooLarge);
  auto keys = ts::load("keys.pddl", "keys-p1.pddl");
  CHECK_THROWS_AS(build_state_graph(keys, GraphMode::full, 2), TooLarge);
}

TEST_CASE("oracle matches the bitmask search on the corpus") {
  auto fixtures = load_manifest(ts::fixture("manifest.txt"));
  CHECK(fixtures.size() == 10);
  for (const auto& f : fixtures) {
    if (f.htn) continue;
    auto p = load_classical(f.domain, f.problem);
    if (p.fluents().size() > 16) continue;
    CAPTURE(f.name);
    CHECK(shortest_solving_trajectory(build_state_graph(p, GraphMode::reachable)) == ts::compile(p).optimal());
  }
}

TEST_CASE("expected.txt is what the oracle generates") {
  auto fixtures = load_manifest(ts::fixture("manifest.txt"));
  CHECK(expected_report(fixtures) == ts::read_text("expected.txt"));
}
