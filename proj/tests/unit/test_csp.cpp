#include <algorithm>
#include <random>

#include "doctest.h"
#include "plankit/csp.hpp"
#include "plankit/validator.hpp"
#include "support.hpp"

using namespace plankit;
using namespace plankit::csp;
namespace ts = testing_support;

namespace {

std::size_t fluent(const ClassicalProblem& p, const char* name) { return *p.fluent_index(make_atom(name)); }
std::size_t action(const ClassicalProblem& p, const char* name) { return *p.find_action(ActionRef{Symbol(name), {}}); }

std::size_t count_role(const CspInstance& c, ConstraintRole r) {
  return std::count_if(c.constraints.begin(), c.constraints.end(), [&](const Constraint& x) { return x.role == r; });
}

// Finds a constraint by role, scope and relation.
template <typename Rel, typename Pred>
bool has_constraint(const CspInstance& c, ConstraintRole role, std::vector<std::size_t> scope, Pred pred) {
  return std::any_of(c.constraints.begin(), c.constraints.end(), [&](const Constraint& x) {
    const auto* rel = std::get_if<Rel>(&x.relation);
    return x.role == role && x.scope == scope && rel && pred(*rel);
  });
}

std::vector<std::string> plan_names(const Plan& plan) {
  std::vector<std::string> out;
  for (const auto& a : plan) out.push_back(a.name().text());
  return out;
}

}  // namespace

TEST_CASE("encoding size at k=4") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 4);
  CHECK(c.variables.size() == (4 + 1) * 3 + 4);
  CHECK(count_role(c, ConstraintRole::init) == 3);
  CHECK(count_role(c, ConstraintRole::goal) == 2);
  REQUIRE_NOTHROW(c.check());

  std::size_t in = fluent(p, "in"), keys = fluent(p, "keys");
  CHECK(has_constraint<FixedValue>(c, ConstraintRole::init, {c.state_var(in, 0)},
                                   [](const FixedValue& f) { return f.value == kTrue; }));
  CHECK(has_constraint<FixedValue>(c, ConstraintRole::goal, {c.state_var(in, 4)},
                                   [](const FixedValue& f) { return f.value == kFalse; }));
  CHECK(has_constraint<FixedValue>(c, ConstraintRole::goal, {c.state_var(keys, 4)},
                                   [](const FixedValue& f) { return f.value == kTrue; }));
  CHECK(c.variable_label(c.state_var(in, 0)) == "(in)[0]");
  CHECK(c.variable_label(c.action_var(2)) == "a[2]");
}

TEST_CASE("variable layout") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  for (std::size_t k : {0, 1, 3}) {
    auto c = encode(p, k);
    std::size_t n = p.fluents().size();
    CHECK(c.variables.size() == (k + 1) * n + k);
    for (const auto& v : c.variables) {
      if (v.kind == VariableKind::state) {
        CHECK(v.step <= k);
        CHECK(v.domain_size == 2);
        CHECK(c.state_var(v.fluent, v.step) == v.id);
      } else {
        CHECK(v.step < k);
        CHECK(v.domain_size == p.actions().size());
        CHECK(c.action_var(v.step) == v.id);
      }
    }
  }
}

TEST_CASE("get_keys constraints") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 3);
  std::size_t g = action(p, "get_keys");
  std::size_t in = fluent(p, "in"), keys = fluent(p, "keys"), open = fluent(p, "open");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(has_constraint<ActionImplies>(c, ConstraintRole::precondition, {c.action_var(i), c.state_var(keys, i)},
                                        [&](const ActionImplies& r) { return r.action == g && r.value == kFalse; }));
    CHECK(has_constraint<ActionImplies>(c, ConstraintRole::effect, {c.action_var(i), c.state_var(keys, i + 1)},
                                        [&](const ActionImplies& r) { return r.action == g && r.value == kTrue; }));
    for (std::size_t f : {in, open}) {
      CHECK(has_constraint<ActionFrame>(c, ConstraintRole::frame,
                                        {c.action_var(i), c.state_var(f, i), c.state_var(f, i + 1)},
                                        [&](const ActionFrame& r) { return r.action == g; }));
    }
    CHECK_FALSE(has_constraint<ActionFrame>(c, ConstraintRole::frame,
                                            {c.action_var(i), c.state_var(keys, i), c.state_var(keys, i + 1)},
                                            [&](const ActionFrame& r) { return r.action == g; }));
  }
}

TEST_CASE("conditional relations allow every tuple with another action") {
  Constraint pre{{0, 1}, ActionImplies{2, kTrue}, ConstraintRole::precondition};
  std::vector<std::size_t> t{2, kFalse};
  CHECK_FALSE(pre.allows(t));
  t = {1, kFalse};
  CHECK(pre.allows(t));
  Constraint frame{{0, 1, 2}, ActionFrame{0}, ConstraintRole::frame};
  std::vector<std::size_t> same{0, 1, 1}, changed{0, 1, 0}, other{1, 1, 0};
  CHECK(frame.allows(same));
  CHECK_FALSE(frame.allows(changed));
  CHECK(frame.allows(other));
}

TEST_CASE("enumerated tuples agree with allows") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 2);
  for (const auto& con : c.constraints) {
    std::vector<std::size_t> sizes;
    for (auto v : con.scope) sizes.push_back(c.variables[v].domain_size);
    auto tuples = con.enumerate(sizes);
    std::size_t allowed = 0;
    std::vector<std::size_t> t(sizes.size(), 0);
    while (true) {
      allowed += con.allows(t);
      std::size_t pos = t.size();
      while (pos > 0 && ++t[pos - 1] == sizes[pos - 1]) t[--pos] = 0;
      if (pos == 0) break;
    }
    CHECK(tuples.size() == allowed);
    for (const auto& tuple : tuples) {
      REQUIRE(tuple.size() == con.scope.size());
      for (std::size_t j = 0; j < tuple.size(); ++j) CHECK(tuple[j] < sizes[j]);
      CHECK(con.allows(tuple));
    }
  }
}

TEST_CASE("check rejects undeclared variables and bad tuples") {
  CspInstance c;
  c.variables.push_back({0, VariableKind::state, 0, 0, 2});
  c.constraints.push_back({{3}, FixedValue{kTrue}, ConstraintRole::other});
  CHECK_THROWS_AS(c.check(), ModelError);
  c.constraints = {{{0}, AllowedTuples{{{0, 1}}}, ConstraintRole::other}};
  CHECK_THROWS_AS(c.check(), ModelError);
  c.constraints = {{{0}, AllowedTuples{{{5}}}, ConstraintRole::other}};
  CHECK_THROWS_AS(c.check(), ModelError);
}

TEST_CASE("horizon semantics on keys") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  CHECK(solve_backtracking(encode(p, 2)).unsat());
  auto r = solve_backtracking(encode(p, 3));
  REQUIRE(r.satisfiable());
  CHECK(r.assignment().complete());
  CHECK(consistent(encode(p, 3), r.assignment()));
  auto plan = decode_plan(encode(p, 3), r.assignment(), p);
  CHECK(plan_names(plan) == std::vector<std::string>{"get_keys", "open_door", "leave"});
  CHECK(validate_plan(p, plan).valid());
}

TEST_CASE("horizon zero") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c0 = encode(p, 0);
  CHECK(std::none_of(c0.variables.begin(), c0.variables.end(),
                     [](const CspVariable& v) { return v.kind == VariableKind::action; }));
  CHECK(solve_backtracking(c0).unsat());

  auto trivial = p.with_goal(Goal({make_atom("in")}, {}));
  auto ct = encode(trivial, 0);
  auto r = solve_backtracking(ct);
  REQUIRE(r.satisfiable());
  CHECK(decode_plan(ct, r.assignment(), trivial).empty());
}

TEST_CASE("empty instance is trivially satisfiable") {
  CspInstance empty;
  auto r = solve_backtracking(empty);
  REQUIRE(r.satisfiable());
  CHECK(r.assignment().values.empty());
  CHECK(r.assignment().complete());
}

TEST_CASE("forward checking") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 3);
  std::size_t keys = fluent(p, "keys");

  Assignment a(c.variables.size());
  a.values[c.action_var(0)] = action(p, "get_keys");
  auto d = forward_check(c, a, Domains::full(c), c.action_var(0));
  REQUIRE(d.has_value());
  CHECK(d->values(c.state_var(keys, 1)) == std::vector<std::size_t>{kTrue});

  // keys[0] is false in I; open_door needs it true.
  Domains nc = Domains::full(c);
  nc.alive[c.state_var(keys, 0)][kTrue] = 0;
  Assignment b(c.variables.size());
  b.values[c.action_var(0)] = action(p, "open_door");
  CHECK_FALSE(forward_check(c, b, nc, c.action_var(0)).has_value());

  // A constraint that allows everything prunes nothing.
  CspInstance loose;
  loose.variables = {{0, VariableKind::state, 0, 0, 2}, {1, VariableKind::state, 0, 1, 2}};
  loose.constraints = {{{0, 1}, AllowedTuples{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}, ConstraintRole::other}};
  Assignment l(2);
  l.values[0] = kTrue;
  auto same = forward_check(loose, l, Domains::full(loose), 0);
  REQUIRE(same.has_value());
  CHECK(same->alive == Domains::full(loose).alive);
}

TEST_CASE("forward checking does not change satisfiability") {
  for (auto [d, pr] : {std::pair{"keys.pddl", "keys-p1.pddl"}, std::pair{"keys.pddl", "keys-p2.pddl"},
                       std::pair{"keys-nokey.pddl", "keys-nokey-p1.pddl"},
                       std::pair{"keys-strips.pddl", "keys-strips-p1.pddl"}}) {
    auto p = ts::load(d, pr);
    for (std::size_t k = 0; k <= 4; ++k) {
      CAPTURE(pr);
      CAPTURE(k);
      auto c = encode(p, k);
      auto with = solve_backtracking(c, true), without = solve_backtracking(c, false);
      CHECK(with.satisfiable() == without.satisfiable());
      CHECK(with.stats.nodes <= without.stats.nodes);
      for (const auto* r : {&with, &without}) {
        if (r->satisfiable()) CHECK(validate_plan(p, decode_plan(c, r->assignment(), p)).valid());
      }
    }
  }
}

TEST_CASE("encoding agrees with exact-length trajectories") {
  for (auto [d, pr] : {std::pair{"keys.pddl", "keys-p1.pddl"}, std::pair{"keys.pddl", "keys-p2.pddl"},
                       std::pair{"keys-nokey.pddl", "keys-nokey-p1.pddl"}}) {
    auto p = ts::load(d, pr);
    auto bits = ts::compile(p);
    for (std::size_t k = 0; k <= 6; ++k) {
      CAPTURE(pr);
      CAPTURE(k);
      CHECK(solve_backtracking(encode(p, k)).satisfiable() == bits.plan_of_length(k));
    }
  }
}

TEST_CASE("property: random problems, encoding agrees with the oracle") {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 150; ++round) {
    auto p = ts::random_problem(rng, 5, 6);
    auto bits = ts::compile(p);
    for (std::size_t k = 0; k <= 3; ++k) {
      auto c = encode(p, k);
      auto r = solve_backtracking(c);
      REQUIRE(r.satisfiable() == bits.plan_of_length(k));
      if (r.satisfiable()) {
        CHECK(consistent(c, r.assignment()));
        CHECK(validate_plan(p, decode_plan(c, r.assignment(), p)).valid());
      }
    }
  }
}

TEST_CASE("min-conflicts") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c3 = encode(p, 3);
  auto r = min_conflicts(c3, 100'000, 1);
  REQUIRE(r.solved());
  const auto& a = std::get<Assignment>(r.outcome);
  CHECK(conflicts(c3, a) == 0);
  CHECK(validate_plan(p, decode_plan(c3, a, p)).valid());

  auto again = min_conflicts(c3, 100'000, 1);
  CHECK(again.steps == r.steps);
  CHECK(std::get<Assignment>(again.outcome).values == a.values);

  CspInstance free_vars;
  free_vars.variables = {{0, VariableKind::state, 0, 0, 2}, {1, VariableKind::state, 0, 1, 2}};
  auto immediate = min_conflicts(free_vars, 10, 7);
  CHECK(immediate.solved());
  CHECK(immediate.steps == 0);

  auto unsat = min_conflicts(encode(p, 2), 2'000, 1);
  REQUIRE_FALSE(unsat.solved());
  CHECK(std::get<Timeout>(unsat.outcome).best_conflicts > 0);
}

TEST_CASE("decoding rejects assignments that are not plans") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 3);
  Assignment bad(c.variables.size());
  for (auto& v : bad.values) v = 0;
  CHECK_THROWS_AS(decode_plan(c, bad, p), DecodeMismatch);
  CHECK_THROWS_AS(decode_plan(c, Assignment(c.variables.size()), p), DecodeMismatch);
}

TEST_CASE("iterative deepening") {
  auto p1 = ts::load("keys.pddl", "keys-p1.pddl");
  auto r = plan_bounded(p1, 5);
  REQUIRE(r.solved());
  CHECK(r.plan().size() == 3);

  auto trivial = p1.with_goal(Goal{});
  auto t = plan_bounded(trivial, 5);
  REQUIRE(t.solved());
  CHECK(t.plan().empty());

  auto p2 = ts::load("keys.pddl", "keys-p2.pddl");
  CHECK(plan_bounded(p2, 3).unsolvable());
  auto r2 = plan_bounded(p2, 4);
  REQUIRE(r2.solved());
  CHECK(r2.plan().size() == 4);

  BoundedOptions local;
  local.method = Method::min_conflicts;
  local.seed = 3;
  local.max_steps = 20'000;
  auto m = plan_bounded(p1, 4, local);
  REQUIRE(m.solved());
  CHECK(validate_plan(p1, m.plan()).valid());
  CHECK(plan_bounded(p2, 2, local).budget_exhausted());

  BoundedOptions starved;
  starved.node_budget = 1;
  CHECK(plan_bounded(p1, 5, starved).budget_exhausted());
}

TEST_CASE("export listing") {
  auto p = ts::load("keys.pddl", "keys-p1.pddl");
  auto c = encode(p, 1);
  std::string text = export_listing(c);
  CHECK(text.rfind("csp-listing 1\nhorizon 1\nvariables 7\nconstraints " + std::to_string(c.constraints.size()) + "\n", 0) ==
        0);
  CHECK(text.find("v 0 state (in)[0] [false true]") != std::string::npos);
  CHECK(text.find("v 3 action a[0] [") != std::string::npos);
  CHECK(text.find("c 0 init [0] {(1)}") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(4 + c.variables.size() + c.constraints.size()));
}
