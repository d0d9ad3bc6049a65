#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/diagnostics.hpp"
#include "plankit/pddl/linker.hpp"
#include "plankit/pddl/unify.hpp"
#include "plankit/search.hpp"

namespace plankit::htn {

enum class TaskKind { primitive, compound };

struct TaskName {
  Symbol symbol;
  TaskKind kind = TaskKind::primitive;
  std::size_t arity = 0;
  friend bool operator==(const TaskName&, const TaskName&) = default;
};

/// A ground task. Task networks only ever hold ground tasks; method bodies
/// keep their variables until a binding is chosen.
struct Task {
  Symbol name;
  TaskKind kind = TaskKind::primitive;
  std::vector<Symbol> args;
  friend bool operator==(const Task&, const Task&) = default;
};

std::string to_string(const Task& t);

/// Totally ordered: list order is execution order.
using TaskNetwork = std::vector<Task>;

/// Domain and problem with the `:task`/`:method`/`:htn` extension, linked.
/// Primitive tasks are the action schemas; compound tasks are the `:task`
/// declarations.
class HtnProblem {
public:
  HtnProblem(pddl::LinkedProblem linked, TaskNetwork initial);

  const pddl::LinkedProblem& linked() const { return *linked_; }
  const pddl::DomainAst& domain() const { return *linked_->domain; }
  const std::vector<pddl::MethodDecl>& methods() const { return domain().methods; }
  const std::vector<TaskName>& task_names() const { return names_; }
  const TaskNetwork& initial_network() const { return initial_; }
  const State& initial_state() const { return s0_; }

  std::optional<TaskName> find_task_name(Symbol name) const;
  const pddl::ActionSchema* operator_for(Symbol name) const { return domain().find_action(name); }

  /// Ground operator for a primitive task. Nullopt when the arguments are
  /// ill-typed or the instance has contradictory preconditions.
  std::optional<GroundAction> ground_operator(const Task& t) const;

private:
  std::shared_ptr<const pddl::LinkedProblem> linked_;
  std::vector<TaskName> names_;
  TaskNetwork initial_;
  State s0_;
};

/// Checks the linked problem's initial network: every task must name an
/// operator or a compound task, with the right arity and argument types.
Result<HtnProblem> make_htn_problem(pddl::LinkedProblem linked);

/// Parses both files with the HTN extension enabled, links them, and checks
/// the initial network (`(:htn :ordered-subtasks ...)`, required).
Result<HtnProblem> parse_htn(std::string_view domain_text, std::string_view problem_text);

struct MethodChoice {
  std::size_t method = 0;  // index into HtnProblem::methods()
  pddl::Binding binding;
};

/// Methods for ground compound task `t` whose precondition holds in `s`, in
/// method declaration order and then binding order. Parameters not fixed by
/// the task pattern range over objects of their type, first parameter
/// varying slowest.
std::vector<MethodChoice> applicable_methods(const Task& t, const State& s, const HtnProblem& p);

struct Successor {
  TaskNetwork network;
  State state;
  std::optional<GroundAction> action;  // set when a primitive task was executed
  std::optional<MethodChoice> method;  // set when a compound task was refined
};

/// Expands the first task of `tn`, which must be non-empty
/// (std::invalid_argument otherwise). A primitive task yields at most one
/// successor; a compound task yields one successor per applicable method,
/// with the subtasks spliced in front of the rest of the network.
std::vector<Successor> decompose_step(const TaskNetwork& tn, const State& s, const HtnProblem& p);

struct TraceNode {
  Task task;
  std::optional<std::string> method;  // compound tasks only
  pddl::Binding binding;
  std::vector<TraceNode> children;
};

struct DecompositionTrace {
  std::vector<TraceNode> roots;

  /// Primitive tasks in left-to-right order.
  std::vector<Task> leaves() const;
  /// Indented text, one task per line.
  std::string render() const;
};

struct HtnConfig {
  std::size_t node_budget = 1'000'000;
  /// Maximum number of method applications on a path. Unset means
  /// 10 * (number of operators + number of methods).
  std::optional<std::size_t> depth_budget;
};

struct HtnResult {
  SearchResult result;
  DecompositionTrace trace;  // filled when a plan was found
};

std::size_t default_depth_budget(const HtnProblem& p);

/// Depth-first backtracking over decompose_step from (tn0, s0). Succeeds when
/// the network is empty. Running out of nodes, or cutting a branch at the
/// depth budget, gives BudgetExhausted; Unsolvable means every choice failed.
HtnResult seek_plan(const HtnProblem& p, const HtnConfig& c = {});

}  // namespace plankit::htn
