#include "plankit/validator.hpp"

#include <algorithm>
#include <optional>

#include "plankit/pddl/lexer.hpp"

namespace plankit {

namespace {

template <typename Resolve, typename Finish>
Verdict replay(const State& init, std::span<const ActionRef> steps, bool with_trace, Resolve resolve, Finish finish) {
  Verdict v;
  State s = init;
  if (with_trace) v.state_trace.push_back(s);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::optional<GroundAction> a = resolve(steps[i]);
    if (!a) {
      v.failure = UnknownAction{i, steps[i]};
      return v;
    }
    if (!applicable(s, *a)) {
      std::vector<GroundAtom> missing, violated;
      for (const auto& q : a->pre_pos()) {
        if (!s.holds(q)) missing.push_back(q);
      }
      for (const auto& q : a->pre_neg()) {
        if (s.holds(q)) violated.push_back(q);
      }
      v.failure = StepNotApplicable{i, AtomSet(std::move(missing)), AtomSet(std::move(violated))};
      return v;
    }
    s = apply(s, *a);
    if (with_trace) v.state_trace.push_back(s);
  }
  finish(s, v);
  return v;
}

}  // namespace

std::vector<ActionRef> refs_of(const Plan& plan) {
  std::vector<ActionRef> out;
  out.reserve(plan.size());
  for (const auto& a : plan) out.push_back(a.ref());
  return out;
}

Verdict validate_plan(const ClassicalProblem& p, std::span<const ActionRef> steps, bool with_trace) {
  auto resolve = [&](const ActionRef& ref) -> std::optional<GroundAction> {
    if (auto i = p.find_action(ref)) return p.actions()[*i];
    return std::nullopt;
  };
  auto finish = [&](const State& s, Verdict& v) {
    if (satisfies(s, p.goal())) return;
    v.failure = GoalUnsatisfied{p.goal().positive().minus(s.atoms()), p.goal().negative().intersection(s.atoms())};
  };
  return replay(p.init(), steps, with_trace, resolve, finish);
}

Verdict validate_plan(const ClassicalProblem& p, const Plan& plan, bool with_trace) {
  auto refs = refs_of(plan);
  return validate_plan(p, refs, with_trace);
}

Verdict validate_htn_solution(const htn::HtnProblem& p, std::span<const ActionRef> steps, bool with_trace) {
  auto resolve = [&](const ActionRef& ref) -> std::optional<GroundAction> {
    return p.ground_operator(htn::Task{ref.name, htn::TaskKind::primitive, ref.args});
  };
  return replay(p.initial_state(), steps, with_trace, resolve, [](const State&, Verdict&) {});
}

Verdict validate_htn_solution(const htn::HtnProblem& p, const Plan& plan, bool with_trace) {
  auto refs = refs_of(plan);
  return validate_htn_solution(p, refs, with_trace);
}

bool trace_matches(const htn::HtnProblem& p, const htn::DecompositionTrace& trace, const Plan& plan) {
  auto leaves = trace.leaves();
  if (leaves.size() != plan.size()) return false;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (leaves[i].name != plan[i].name() || leaves[i].args != plan[i].args()) return false;
  }
  auto shaped = [&](const auto& self, const htn::TraceNode& n) -> bool {
    if (n.method) {
      auto it = std::find_if(p.methods().begin(), p.methods().end(),
                             [&](const auto& m) { return m.name.text() == *n.method; });
      if (it == p.methods().end() || it->subtasks.size() != n.children.size()) return false;
    } else if (!n.children.empty()) {
      return false;
    }
    for (const auto& c : n.children) {
      if (!self(self, c)) return false;
    }
    return true;
  };
  for (const auto& r : trace.roots) {
    if (!shaped(shaped, r)) return false;
  }
  return true;
}

std::string Verdict::describe(std::span<const ActionRef> steps) const {
  auto literals = [](const AtomSet& missing, const AtomSet& violated) {
    std::string out;
    if (!missing.empty()) out += "missing " + to_string(missing);
    if (!violated.empty()) out += std::string(out.empty() ? "" : ", ") + "violated (not ...) " + to_string(violated);
    return out;
  };
  auto step_name = [&](std::size_t i) { return i < steps.size() ? " " + to_string(steps[i]) : std::string(); };
  if (valid()) return "valid";
  if (const auto* f = std::get_if<StepNotApplicable>(&failure)) {
    return "step " + std::to_string(f->index) + step_name(f->index) + " not applicable: " + literals(f->missing, f->violated);
  }
  if (const auto* f = std::get_if<GoalUnsatisfied>(&failure)) return "goal not satisfied: " + literals(f->missing, f->violated);
  const auto& f = std::get<UnknownAction>(failure);
  return "step " + std::to_string(f.index) + " " + to_string(f.step) + " is not an action of the problem";
}

Result<std::vector<ActionRef>> parse_plan(std::string_view text) {
  std::vector<Diagnostic> diags;
  std::vector<pddl::Token> tokens;
  try {
    tokens = pddl::tokenize(text);
  } catch (const pddl::LexError& e) {
    diags.push_back({Severity::error, DiagnosticCode::lex_error, e.what(), e.span, {}});
    return {std::nullopt, std::move(diags)};
  }
  std::vector<ActionRef> steps;
  std::size_t i = 0;
  auto fail = [&](std::string msg, Span span) -> Result<std::vector<ActionRef>> {
    diags.push_back({Severity::error, DiagnosticCode::syntax_error, std::move(msg), span, {}});
    return {std::nullopt, std::move(diags)};
  };
  while (i < tokens.size()) {
    if (tokens[i].kind != pddl::TokenKind::lparen) return fail("expected '(' to start a plan step", tokens[i].span);
    Span open = tokens[i++].span;
    if (i >= tokens.size() || tokens[i].kind != pddl::TokenKind::identifier) {
      return fail("expected an action name", i < tokens.size() ? tokens[i].span : open);
    }
    ActionRef ref{Symbol(tokens[i++].text), {}};
    while (i < tokens.size() && tokens[i].kind == pddl::TokenKind::identifier) ref.args.emplace_back(tokens[i++].text);
    if (i >= tokens.size() || tokens[i].kind != pddl::TokenKind::rparen) {
      return fail("expected ')' to close the plan step", i < tokens.size() ? tokens[i].span : open);
    }
    ++i;
    steps.push_back(std::move(ref));
  }
  return {std::move(steps), std::move(diags)};
}

}  // namespace plankit
