#include "plankit/htn.hpp"

#include <algorithm>
#include <stdexcept>

#include "plankit/grounder.hpp"
#include "plankit/pddl/parser.hpp"

namespace plankit::htn {

std::string to_string(const Task& t) {
  std::string out = "(" + t.name.text();
  for (const auto& a : t.args) out += " " + a.text();
  return out + ")";
}

HtnProblem::HtnProblem(pddl::LinkedProblem linked, TaskNetwork initial)
    : linked_(std::make_shared<const pddl::LinkedProblem>(std::move(linked))),
      initial_(std::move(initial)),
      s0_(AtomSet(linked_->init)) {
  for (const auto& a : domain().actions) names_.push_back({a.name, TaskKind::primitive, a.params.size()});
  for (const auto& t : domain().tasks) names_.push_back({t.name, TaskKind::compound, t.params.size()});
}

std::optional<TaskName> HtnProblem::find_task_name(Symbol name) const {
  auto it = std::find_if(names_.begin(), names_.end(), [&](const TaskName& n) { return n.symbol == name; });
  if (it == names_.end()) return std::nullopt;
  return *it;
}

namespace {

bool well_typed(const std::vector<pddl::TypedName>& params, const std::vector<Symbol>& args,
                const pddl::LinkedProblem& linked) {
  if (params.size() != args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto type = linked.type_of(args[i]);
    if (!type || !linked.types.is_subtype(*type, params[i].type)) return false;
  }
  return true;
}

bool holds(const std::vector<pddl::Literal>& condition, const pddl::Binding& b, const State& s) {
  return std::all_of(condition.begin(), condition.end(),
                     [&](const pddl::Literal& l) { return s.holds(pddl::substitute(l.atom, b)) == l.positive; });
}

}  // namespace

std::optional<GroundAction> HtnProblem::ground_operator(const Task& t) const {
  const auto* schema = operator_for(t.name);
  if (!schema || !well_typed(schema->params, t.args, linked())) return std::nullopt;
  pddl::Binding b;
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (!b.bind(schema->params[i].name, t.args[i])) return std::nullopt;
  }
  return instantiate(*schema, b);
}

Result<HtnProblem> make_htn_problem(pddl::LinkedProblem linked) {
  std::vector<Diagnostic> diags;
  auto error = [&](DiagnosticCode code, std::string msg, Span span) {
    diags.push_back({Severity::error, code, std::move(msg), span, {}});
  };
  const auto& problem = *linked.problem;
  const auto& domain = *linked.domain;
  if (!problem.initial_tasks) {
    error(DiagnosticCode::other, "problem has no (:htn ...) task network", problem.span);
    return {std::nullopt, std::move(diags)};
  }
  TaskNetwork tn;
  for (const auto& atom : *problem.initial_tasks) {
    const std::vector<pddl::TypedName>* params = nullptr;
    TaskKind kind = TaskKind::primitive;
    if (const auto* a = domain.find_action(atom.head)) {
      params = &a->params;
    } else if (const auto* t = domain.find_task(atom.head)) {
      params = &t->params;
      kind = TaskKind::compound;
    } else {
      error(DiagnosticCode::unknown_task, "unknown task '" + atom.head.text() + "'", atom.span);
      continue;
    }
    if (params->size() != atom.args.size()) {
      error(DiagnosticCode::arity_mismatch,
            "task '" + atom.head.text() + "' takes " + std::to_string(params->size()) + " arguments, got " +
                std::to_string(atom.args.size()),
            atom.span);
      continue;
    }
    Task task{atom.head, kind, {}};
    for (const auto& arg : atom.args) task.args.push_back(arg.name);
    if (!well_typed(*params, task.args, linked)) {
      error(DiagnosticCode::type_mismatch, "ill-typed arguments in task " + to_string(task), atom.span);
      continue;
    }
    tn.push_back(std::move(task));
  }
  if (has_errors(diags)) return {std::nullopt, std::move(diags)};
  return {HtnProblem(std::move(linked), std::move(tn)), std::move(diags)};
}

Result<HtnProblem> parse_htn(std::string_view domain_text, std::string_view problem_text) {
  pddl::ParseOptions options{.allow_htn = true};
  auto d = pddl::parse_domain(domain_text, options);
  auto p = pddl::parse_problem(problem_text, options);
  std::vector<Diagnostic> diags = d.diagnostics;
  diags.insert(diags.end(), p.diagnostics.begin(), p.diagnostics.end());
  if (!d || !p) return {std::nullopt, std::move(diags)};
  auto linked = pddl::link(*d, *p);
  diags.insert(diags.end(), linked.diagnostics.begin(), linked.diagnostics.end());
  if (!linked) return {std::nullopt, std::move(diags)};
  auto htn = make_htn_problem(std::move(*linked));
  diags.insert(diags.end(), htn.diagnostics.begin(), htn.diagnostics.end());
  return {std::move(htn.value), std::move(diags)};
}

std::vector<MethodChoice> applicable_methods(const Task& t, const State& s, const HtnProblem& p) {
  std::vector<MethodChoice> out;
  const auto& linked = p.linked();
  GroundAtom as_atom{t.name, t.args};
  for (std::size_t mi = 0; mi < p.methods().size(); ++mi) {
    const auto& m = p.methods()[mi];
    if (m.task.head != t.name) continue;
    auto seed = pddl::unify(m.task, as_atom);
    if (!seed) continue;
    std::vector<std::vector<Symbol>> lists;
    bool ok = true;
    for (const auto& param : m.params) {
      if (auto v = seed->get(param.name)) {
        auto type = linked.type_of(*v);
        ok = ok && type && linked.types.is_subtype(*type, param.type);
        lists.push_back({*v});
      } else {
        lists.push_back(objects_of_type(param.type, linked));
      }
    }
    if (!ok) continue;
    for_each_tuple(lists, [&](const std::vector<Symbol>& tuple) {
      pddl::Binding b = *seed;
      for (std::size_t i = 0; i < tuple.size(); ++i) b.bind(m.params[i].name, tuple[i]);
      if (holds(m.precondition, b, s)) out.push_back({mi, std::move(b)});
    });
  }
  return out;
}

std::vector<Successor> decompose_step(const TaskNetwork& tn, const State& s, const HtnProblem& p) {
  if (tn.empty()) throw std::invalid_argument("decompose_step needs a non-empty task network");
  const Task& first = tn.front();
  std::vector<Successor> out;
  if (first.kind == TaskKind::primitive) {
    auto op = p.ground_operator(first);
    if (op && applicable(s, *op)) {
      State next = apply(s, *op);
      out.push_back({TaskNetwork(tn.begin() + 1, tn.end()), std::move(next), std::move(op), std::nullopt});
    }
    return out;
  }
  for (auto& choice : applicable_methods(first, s, p)) {
    TaskNetwork network;
    for (const auto& st : p.methods()[choice.method].subtasks) {
      GroundAtom g = pddl::substitute(st, choice.binding);
      auto name = p.find_task_name(g.predicate);
      network.push_back({g.predicate, name ? name->kind : TaskKind::primitive, std::move(g.args)});
    }
    network.insert(network.end(), tn.begin() + 1, tn.end());
    out.push_back({std::move(network), s, std::nullopt, std::move(choice)});
  }
  return out;
}

std::vector<Task> DecompositionTrace::leaves() const {
  std::vector<Task> out;
  auto walk = [&](const auto& self, const TraceNode& n) -> void {
    if (n.children.empty() && !n.method) out.push_back(n.task);
    for (const auto& c : n.children) self(self, c);
  };
  for (const auto& r : roots) walk(walk, r);
  return out;
}

std::string DecompositionTrace::render() const {
  std::string out;
  auto walk = [&](const auto& self, const TraceNode& n, std::size_t depth) -> void {
    out += std::string(2 * depth, ' ') + to_string(n.task);
    if (n.method) {
      out += " by " + *n.method;
      if (n.binding.size()) out += " " + pddl::to_string(n.binding);
    }
    out += "\n";
    for (const auto& c : n.children) self(self, c, depth + 1);
  };
  for (const auto& r : roots) walk(walk, r, 0);
  return out;
}

std::size_t default_depth_budget(const HtnProblem& p) {
  return 10 * (p.domain().actions.size() + p.methods().size());
}

namespace {

class Planner {
public:
  Planner(const HtnProblem& p, const HtnConfig& c)
      : p_(p), node_budget_(c.node_budget), depth_budget_(c.depth_budget.value_or(default_depth_budget(p))) {}

  HtnResult run() {
    if (node_budget_ == 0) throw std::invalid_argument("node budget must be positive");
    auto start = std::chrono::steady_clock::now();
    HtnResult out{{Unsolvable{}, {}}, {}};
    if (dfs(p_.initial_network(), p_.initial_state(), 0)) {
      out.result.outcome = plan_;
      out.trace = rebuild();
    } else if (exhausted_ || cut_) {
      out.result.outcome = BudgetExhausted{};
    }
    out.result.stats = stats_;
    out.result.stats.duration = std::chrono::steady_clock::now() - start;
    return out;
  }

private:
  struct Record {
    Task task;
    std::optional<MethodChoice> method;
  };

  bool dfs(const TaskNetwork& tn, const State& s, std::size_t depth) {
    if (tn.empty()) return true;
    if (stats_.expanded >= node_budget_) {
      exhausted_ = true;
      return false;
    }
    ++stats_.expanded;
    auto successors = decompose_step(tn, s, p_);
    stats_.generated += successors.size();
    for (auto& succ : successors) {
      std::size_t next_depth = depth + (succ.method ? 1 : 0);
      if (next_depth > depth_budget_) {
        cut_ = true;
        continue;
      }
      records_.push_back({tn.front(), succ.method});
      if (succ.action) plan_.push_back(*succ.action);
      stats_.max_frontier = std::max(stats_.max_frontier, records_.size());
      if (dfs(succ.network, succ.state, next_depth)) return true;
      if (exhausted_) return false;
      records_.pop_back();
      if (succ.action) plan_.pop_back();
    }
    return false;
  }

  /// Records are the expanded tasks in preorder; each refined task is
  /// followed by the records of its subtasks.
  DecompositionTrace rebuild() const {
    DecompositionTrace trace;
    std::size_t i = 0;
    auto build = [&](const auto& self) -> TraceNode {
      const Record& r = records_[i++];
      TraceNode node{r.task, std::nullopt, {}, {}};
      if (r.method) {
        const auto& m = p_.methods()[r.method->method];
        node.method = m.name.text();
        node.binding = r.method->binding;
        for (std::size_t k = 0; k < m.subtasks.size(); ++k) node.children.push_back(self(self));
      }
      return node;
    };
    while (i < records_.size()) trace.roots.push_back(build(build));
    return trace;
  }

  const HtnProblem& p_;
  std::size_t node_budget_;
  std::size_t depth_budget_;
  SearchStatistics stats_;
  std::vector<Record> records_;
  Plan plan_;
  bool exhausted_ = false;
  bool cut_ = false;
};

}  // namespace

HtnResult seek_plan(const HtnProblem& p, const HtnConfig& c) { return Planner(p, c).run(); }

}  // namespace plankit::htn
