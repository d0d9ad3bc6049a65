#include <algorithm>
#include <random>

#include "doctest.h"
#include "plankit/search.hpp"
#include "plankit/validator.hpp"
#include "support.hpp"

using namespace plankit;
namespace ts = testing_support;

namespace {

std::vector<std::string> action_names(const ClassicalProblem& p, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(to_string(p.actions()[i].ref()));
  return out;
}

std::vector<std::string> plan_names(const Plan& plan) {
  std::vector<std::string> out;
  for (const auto& a : plan) out.push_back(a.name().text());
  return out;
}

SearchConfig bfs() {
  SearchConfig c;
  c.strategy = Strategy::bfs;
  return c;
}

}  // namespace

TEST_CASE("applicable actions along the keys trace") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  CHECK(action_names(p, applicable_actions(p.init(), p)) == std::vector<std::string>{"(get_keys)"});

  State after = apply(p.init(), p.actions()[applicable_actions(p.init(), p)[0]]);
  auto next = action_names(p, applicable_actions(after, p));
  std::sort(next.begin(), next.end());
  CHECK(next == std::vector<std::string>{"(drop_keys)", "(open_door)"});

  ClassicalProblem empty(p.fluents(), {}, p.init(), p.goal());
  CHECK(applicable_actions(p.init(), empty).empty());
}

TEST_CASE("relevant actions") {
  auto strips = ts::load("keys-strips.pddl", "keys-strips-p1.pddl");
  CHECK(action_names(strips, relevant_actions(Goal({make_atom("owns", {"key"})}, {}), strips)) ==
        std::vector<std::string>{"(getkeys)"});
  CHECK(relevant_actions(Goal{}, strips).empty());

  auto home = ts::load("smart-home.pddl", "smart-home-p1.pddl");
  CHECK(action_names(home, relevant_actions(Goal({make_atom("holds", {"k1"})}, {}), home)) ==
        std::vector<std::string>{"(get-keys a1 k1)"});
}

TEST_CASE("forward dfs reproduces the keys trace") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto r = forward_search(p);
  REQUIRE(r.solved());
  CHECK(plan_names(r.plan()) == std::vector<std::string>{"get_keys", "open_door", "leave"});
}

TEST_CASE("forward bfs finds shortest plans") {
  auto p1 = ts::load("keys.pddl", "keys-p1.pddl");
  auto r1 = forward_search(p1, bfs());
  REQUIRE(r1.solved());
  CHECK(r1.plan().size() == 3);

  auto p2 = ts::load("keys.pddl", "keys-p2.pddl");
  auto r2 = forward_search(p2, bfs());
  REQUIRE(r2.solved());
  CHECK(r2.plan().size() == 4);
  CHECK(validate_plan(p2, r2.plan()).valid());
}

TEST_CASE("goal already satisfied gives the empty plan") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl").with_goal(Goal({make_atom("in")}, {}));
  for (auto s : {Strategy::dfs, Strategy::bfs}) {
    SearchConfig c;
    c.strategy = s;
    auto f = forward_search(p, c);
    REQUIRE(f.solved());
    CHECK(f.plan().empty());
    auto b = backward_search(p, c);
    REQUIRE(b.solved());
    CHECK(b.plan().empty());
  }
}

TEST_CASE("backward search on keys") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto r = backward_search(p);
  REQUIRE(r.solved());
  CHECK(r.plan().size() == 3);
  CHECK(validate_plan(p, r.plan()).valid());
}

TEST_CASE("unreachable goal atom is unsolvable") {
  auto p = ts::load("keys-nokey.pddl", "keys-nokey-p1.pddl");
  CHECK(forward_search(p).unsolvable());
  CHECK(forward_search(p, bfs()).unsolvable());
  CHECK(backward_search(p).unsolvable());
  CHECK(backward_search(p, bfs()).unsolvable());
}

TEST_CASE("budgets") {
  auto p = ts::load("keys.pddl", "keys-p2.pddl");
  SearchConfig tiny;
  tiny.node_budget = 1;
  CHECK(forward_search(p, tiny).budget_exhausted());
  CHECK(backward_search(p, tiny).budget_exhausted());

  SearchConfig shallow = bfs();
  shallow.max_depth = 3;
  CHECK(forward_search(p, shallow).budget_exhausted());

  SearchConfig zero;
  zero.node_budget = 0;
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
  CHECK_THROWS_AS(forward_search(p, zero), std::invalid_argument);
}

TEST_CASE("without cycle checking bfs still finds the shortest plan") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  SearchConfig c = bfs();
  c.cycle_checking = false;
  auto r = forward_search(p, c);
  REQUIRE(r.solved());
  CHECK(r.plan().size() == 3);
}

TEST_CASE("determinism") {
  auto p = ts::load("logistics.pddl", "logistics-p1.pddl");
  for (auto s : {Strategy::dfs, Strategy::bfs}) {
    SearchConfig c;
    c.strategy = s;
    auto a = forward_search(p, c), b = forward_search(p, c);
    REQUIRE(a.solved());
    CHECK(a.plan() == b.plan());
    CHECK(a.stats.expanded == b.stats.expanded);
    CHECK(a.stats.generated == b.stats.generated);
    CHECK(a.stats.max_frontier == b.stats.max_frontier);
    auto x = backward_search(p, c), y = backward_search(p, c);
    REQUIRE(x.solved());
    CHECK(x.plan() == y.plan());
    CHECK(x.stats.expanded == y.stats.expanded);
  }
}

TEST_CASE("fixtures: engines agree with the bitmask oracle") {
  for (auto [d, p] : {std::pair{"keys.pddl", "keys-p1.pddl"}, std::pair{"keys.pddl", "keys-p2.pddl"},
                      std::pair{"keys-strips.pddl", "keys-strips-p1.pddl"},
                      std::pair{"keys-nokey.pddl", "keys-nokey-p1.pddl"}, std::pair{"logistics.pddl", "logistics-p1.pddl"}}) {
    CAPTURE(p);
    auto problem = ts::load(d, p);
    auto optimal = ts::compile(problem).optimal();
    auto f = forward_search(problem, bfs());
    auto fd = forward_search(problem);
    auto b = backward_search(problem);
    REQUIRE(f.solved() == optimal.has_value());
    CHECK(fd.solved() == optimal.has_value());
    CHECK(b.solved() == optimal.has_value());
    if (!optimal) continue;
    CHECK(f.plan().size() == *optimal);
    CHECK(validate_plan(problem, f.plan()).valid());
    CHECK(validate_plan(problem, fd.plan()).valid());
    CHECK(validate_plan(problem, b.plan()).valid());
  }
}

TEST_CASE("property: random problems, soundness, completeness and bfs optimality") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 400; ++round) {
    auto p = ts::random_problem(rng, 6, 10);
    auto optimal = ts::compile(p).optimal();
    auto f = forward_search(p, bfs());
    auto fd = forward_search(p);
    auto b = backward_search(p);
    auto bb = backward_search(p, bfs());
    REQUIRE(f.solved() == optimal.has_value());
    CHECK(fd.solved() == optimal.has_value());
    CHECK(b.solved() == optimal.has_value());
    CHECK(bb.solved() == optimal.has_value());
    if (!optimal) {
      CHECK(f.unsolvable());
      CHECK(b.unsolvable());
      continue;
    }
    CHECK(f.plan().size() == *optimal);
    for (const auto* r : {&f, &fd, &b, &bb}) CHECK(validate_plan(p, r->plan()).valid());
  }
}
