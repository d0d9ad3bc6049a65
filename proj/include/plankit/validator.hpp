#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/diagnostics.hpp"
#include "plankit/grounder.hpp"
#include "plankit/htn.hpp"

namespace plankit {

/// Step `index` could not be applied: `missing` positive preconditions are
/// false, `violated` negative preconditions are true.
struct StepNotApplicable {
  std::size_t index = 0;
  AtomSet missing;
  AtomSet violated;
};

/// The final state misses positive goal atoms or contains negative ones.
struct GoalUnsatisfied {
  AtomSet missing;
  AtomSet violated;
};

/// Step `index` names no ground action of the problem.
struct UnknownAction {
  std::size_t index = 0;
  ActionRef step;
};

using Failure = std::variant<std::monostate, StepNotApplicable, GoalUnsatisfied, UnknownAction>;

struct Verdict {
  Failure failure;
  std::vector<State> state_trace;  // |plan| + 1 states when requested and valid

  bool valid() const { return std::holds_alternative<std::monostate>(failure); }
  /// One line, e.g. "valid" or "step 0 (unlock) not applicable: missing (owns key)".
  std::string describe(std::span<const ActionRef> steps = {}) const;
};

/// Replays the steps from I, checking each precondition, then the goal. The
/// trace, when requested, holds every state visited up to the failure.
Verdict validate_plan(const ClassicalProblem& p, std::span<const ActionRef> steps, bool with_trace = false);
Verdict validate_plan(const ClassicalProblem& p, const Plan& plan, bool with_trace = false);

/// Replays operator instances from s0 with no goal check.
Verdict validate_htn_solution(const htn::HtnProblem& p, std::span<const ActionRef> steps, bool with_trace = false);
Verdict validate_htn_solution(const htn::HtnProblem& p, const Plan& plan, bool with_trace = false);

/// The trace's primitive leaves spell out `plan` exactly and every refined
/// node has as many children as its method has subtasks.
bool trace_matches(const htn::HtnProblem& p, const htn::DecompositionTrace& trace, const Plan& plan);

/// One `(name arg ...)` per line; `;` starts a comment. Lowercased like PDDL.
Result<std::vector<ActionRef>> parse_plan(std::string_view text);

std::vector<ActionRef> refs_of(const Plan& plan);

}  // namespace plankit
