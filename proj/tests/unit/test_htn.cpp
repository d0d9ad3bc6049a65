#include <algorithm>

#include "doctest.h"
#include "plankit/htn.hpp"
#include "plankit/validator.hpp"
#include "support.hpp"

using namespace plankit;
using namespace plankit::htn;
namespace ts = testing_support;

namespace {

HtnProblem parse_fixture(const char* domain, const char* problem) {
  auto r = parse_htn(ts::read_text(domain), ts::read_text(problem));
  REQUIRE(r.ok());
  return *r.value;
}

std::vector<std::string> plan_names(const Plan& plan) {
  std::vector<std::string> out;
  for (const auto& a : plan) out.push_back(a.name().text());
  return out;
}

Task prim(const char* name) { return Task{Symbol(name), TaskKind::primitive, {}}; }
Task compound(const char* name, std::vector<Symbol> args = {}) { return Task{Symbol(name), TaskKind::compound, args}; }

const char* kFetchDomain = R"(
(define (domain fetch)
  (:requirements :strips :typing :hierarchy :method-preconditions)
  (:types key agent - object digital-key yale-key car-key - key)
  (:predicates (owns ?a - agent ?k - key) (holds ?k - key))
  (:task fetch :parameters (?a - agent ?k - key))
  (:method take-own-key
    :parameters (?a - agent ?k - key)
    :task (fetch ?a ?k)
    :precondition (owns ?a ?k)
    :ordered-subtasks (and (get-keys ?a ?k)))
  (:action get-keys
    :parameters (?a - agent ?k - key)
    :precondition (owns ?a ?k)
    :effect (holds ?k)))
)";

std::string fetch_problem(const char* key) {
  return std::string(R"(
(define (problem fetch-1) (:domain fetch)
  (:objects k1 - digital-key k2 k3 - yale-key k4 - car-key a1 - agent)
  (:init (owns a1 k1) (owns a1 k2) (owns a1 k3))
  (:htn :ordered-subtasks (and (fetch a1 )") + key + "))))";
}

}  // namespace

TEST_CASE("parse the keys HTN fixture") {
  auto p = parse_fixture("keys-htn.pddl", "keys-htn-p1.pddl");
  std::size_t compound_tasks = std::count_if(p.task_names().begin(), p.task_names().end(),
                                             [](const TaskName& t) { return t.kind == TaskKind::compound; });
  CHECK(compound_tasks == 1);
  REQUIRE(p.methods().size() == 1);
  const auto& m = p.methods()[0];
  REQUIRE(m.subtasks.size() == 3);
  for (const auto& st : m.subtasks) {
    auto name = p.find_task_name(st.head);
    REQUIRE(name.has_value());
    CHECK(name->kind == TaskKind::primitive);
    CHECK(p.operator_for(st.head) != nullptr);
  }
  CHECK(p.initial_network() == TaskNetwork{compound("leave-home")});
  CHECK(default_depth_budget(p) == 10 * (8 + 1));
}

TEST_CASE("compound task without methods is a warning") {
  const char* domain = R"(
(define (domain lonely) (:requirements :hierarchy)
  (:predicates (p))
  (:task stuck :parameters ())
  (:action a :effect (p))))";
  const char* problem = "(define (problem l) (:domain lonely) (:init) (:htn :ordered-subtasks (and (stuck))))";
  auto r = parse_htn(domain, problem);
  REQUIRE(r.ok());
  CHECK(std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                    [](const Diagnostic& d) { return d.severity == Severity::warning; }));
  CHECK(seek_plan(*r.value).result.unsolvable());
}

TEST_CASE("method variable bound by neither task nor parameters") {
  const char* domain = R"(
(define (domain loose) (:requirements :hierarchy)
  (:predicates (p ?x))
  (:task t :parameters ())
  (:method m :parameters () :task (t) :ordered-subtasks (and (a ?free)))
  (:action a :parameters (?x) :effect (p ?x))))";
  const char* problem = "(define (problem l) (:domain loose) (:init) (:htn :ordered-subtasks (and (t))))";
  auto r = parse_htn(domain, problem);
  CHECK_FALSE(r.ok());
  CHECK(std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                    [](const Diagnostic& d) { return d.code == DiagnosticCode::undeclared_variable; }));
}

TEST_CASE("problem without an :htn section is rejected") {
  auto r = parse_htn(ts::read_text("keys-htn.pddl"), "(define (problem x) (:domain keys-htn) (:init (in)) (:goal (and)))");
  CHECK_FALSE(r.ok());
}

TEST_CASE("applicable methods") {
  auto p = parse_fixture("keys-htn.pddl", "keys-htn-p1.pddl");
  auto ms = applicable_methods(compound("leave-home"), p.initial_state(), p);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].method == 0);
  CHECK(ms[0].binding.size() == 0);

  CHECK(applicable_methods(compound("no-such-task"), p.initial_state(), p).empty());

  auto with_k1 = parse_htn(kFetchDomain, fetch_problem("k1"));
  REQUIRE(with_k1.ok());
  auto k1 = applicable_methods(with_k1->initial_network()[0], with_k1->initial_state(), *with_k1);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0].binding.get(Symbol("?k")) == Symbol("k1"));

  auto with_k4 = parse_htn(kFetchDomain, fetch_problem("k4"));
  REQUIRE(with_k4.ok());
  CHECK(applicable_methods(with_k4->initial_network()[0], with_k4->initial_state(), *with_k4).empty());
  CHECK(seek_plan(*with_k4).result.unsolvable());
  auto fetched = seek_plan(*with_k1);
  REQUIRE(fetched.result.solved());
  CHECK(to_string(fetched.result.plan()) == "(get-keys a1 k1)");
}

TEST_CASE("decompose_step") {
  auto p = parse_fixture("keys-htn.pddl", "keys-htn-p1.pddl");
  auto refined = decompose_step({compound("leave-home")}, p.initial_state(), p);
  REQUIRE(refined.size() == 1);
  CHECK(refined[0].network == TaskNetwork{prim("get_keys"), prim("open_door"), prim("leave")});
  CHECK(refined[0].state == p.initial_state());
  CHECK(refined[0].method.has_value());
  CHECK_FALSE(refined[0].action.has_value());

  auto stepped = decompose_step(refined[0].network, p.initial_state(), p);
  REQUIRE(stepped.size() == 1);
  REQUIRE(stepped[0].action.has_value());
  CHECK(stepped[0].action->name() == Symbol("get_keys"));
  CHECK(stepped[0].state.holds(make_atom("keys")));
  CHECK(stepped[0].network == TaskNetwork{prim("open_door"), prim("leave")});

  CHECK(decompose_step({prim("leave")}, p.initial_state(), p).empty());
  CHECK_THROWS_AS(decompose_step({}, p.initial_state(), p), std::invalid_argument);
}

TEST_CASE("decomposition keeps the rest of the network in order") {
  auto p = parse_fixture("keys-htn-choice.pddl", "keys-htn-choice-p1.pddl");
  std::vector<TaskNetwork> networks{
      {compound("go-out"), prim("drop_keys"), compound("go-out")},
      {prim("get_keys"), compound("go-out"), prim("enter")},
      {compound("go-out"), compound("go-out"), prim("leave"), prim("get_keys")},
  };
  State with_keys = p.initial_state();
  with_keys = State(with_keys.atoms().united(AtomSet{make_atom("keys")}));
  for (const auto& tn : networks) {
    for (const State& s : {p.initial_state(), with_keys}) {
      for (const auto& succ : decompose_step(tn, s, p)) {
        TaskNetwork rest(tn.begin() + 1, tn.end());
        REQUIRE(succ.network.size() >= rest.size());
        CHECK(TaskNetwork(succ.network.end() - rest.size(), succ.network.end()) == rest);
      }
    }
  }
}

TEST_CASE("seek_plan on keys") {
  auto p = parse_fixture("keys-htn.pddl", "keys-htn-p1.pddl");
  auto r = seek_plan(p);
  REQUIRE(r.result.solved());
  CHECK(plan_names(r.result.plan()) == std::vector<std::string>{"get_keys", "open_door", "leave"});
  CHECK(validate_htn_solution(p, r.result.plan()).valid());
  CHECK(trace_matches(p, r.trace, r.result.plan()));
  REQUIRE(r.trace.roots.size() == 1);
  CHECK(r.trace.roots[0].method == std::optional<std::string>("leave-with-keys"));
  CHECK(r.trace.render().find("(leave-home) by leave-with-keys") != std::string::npos);
}

TEST_CASE("seek_plan falls back to the second method") {
  auto p = parse_fixture("keys-htn-choice.pddl", "keys-htn-choice-p1.pddl");
  auto r = seek_plan(p);
  REQUIRE(r.result.solved());
  CHECK(plan_names(r.result.plan()) == std::vector<std::string>{"get_keys", "open_door", "leave"});
  REQUIRE(r.trace.roots.size() == 1);
  CHECK(r.trace.roots[0].method == std::optional<std::string>("careful"));
  CHECK(trace_matches(p, r.trace, r.result.plan()));
}

TEST_CASE("empty initial network") {
  auto r = parse_htn(ts::read_text("keys-htn.pddl"), "(define (problem x) (:domain keys-htn) (:init (in)) (:htn :ordered-subtasks ()))");
  REQUIRE(r.ok());
  auto s = seek_plan(*r.value);
  REQUIRE(s.result.solved());
  CHECK(s.result.plan().empty());
  CHECK(s.trace.roots.empty());
  CHECK(validate_htn_solution(*r.value, s.result.plan()).valid());
}

TEST_CASE("recursive methods hit the depth budget") {
  auto p = parse_fixture("recursive-htn.pddl", "recursive-htn-p1.pddl");
  auto r = seek_plan(p);
  CHECK(r.result.budget_exhausted());

  HtnConfig small;
  small.depth_budget = 3;
  CHECK(seek_plan(p, small).result.budget_exhausted());

  HtnConfig few_nodes;
  few_nodes.node_budget = 5;
  few_nodes.depth_budget = 1'000'000;
  CHECK(seek_plan(p, few_nodes).result.budget_exhausted());
}

TEST_CASE("validate_htn_solution reports the failing step") {
  auto p = parse_fixture("keys-htn.pddl", "keys-htn-p1.pddl");
  std::vector<ActionRef> steps{{Symbol("get_keys"), {}}, {Symbol("leave"), {}}};
  auto v = validate_htn_solution(p, steps);
  REQUIRE_FALSE(v.valid());
  const auto* f = std::get_if<StepNotApplicable>(&v.failure);
  REQUIRE(f != nullptr);
  CHECK(f->index == 1);
  CHECK(f->missing == AtomSet{make_atom("open")});

  std::vector<ActionRef> unknown{{Symbol("fly"), {}}};
  CHECK(std::holds_alternative<UnknownAction>(validate_htn_solution(p, unknown).failure));
}
