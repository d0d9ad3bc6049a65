#include "plankit/csp.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

namespace plankit::csp {

std::string_view to_string(ConstraintRole r) {
  switch (r) {
    case ConstraintRole::init: return "init";
    case ConstraintRole::goal: return "goal";
    case ConstraintRole::precondition: return "precondition";
    case ConstraintRole::effect: return "effect";
    case ConstraintRole::frame: return "frame";
    case ConstraintRole::other: break;
  }
  return "other";
}

namespace {

std::size_t arity_of(const Relation& r) {
  struct {
    std::size_t operator()(const AllowedTuples&) const { return 0; }
    std::size_t operator()(const FixedValue&) const { return 1; }
    std::size_t operator()(const ActionImplies&) const { return 2; }
    std::size_t operator()(const ActionFrame&) const { return 3; }
  } v;
  return std::visit(v, r);
}

}  // namespace

bool Constraint::allows(std::span<const std::size_t> values) const {
  if (const auto* t = std::get_if<AllowedTuples>(&relation)) {
    return std::any_of(t->tuples.begin(), t->tuples.end(),
                       [&](const auto& tuple) { return std::equal(tuple.begin(), tuple.end(), values.begin(), values.end()); });
  }
  if (const auto* f = std::get_if<FixedValue>(&relation)) return values[0] == f->value;
  if (const auto* i = std::get_if<ActionImplies>(&relation)) return values[0] != i->action || values[1] == i->value;
  const auto& fr = std::get<ActionFrame>(relation);
  return values[0] != fr.action || values[1] == values[2];
}

std::vector<std::vector<std::size_t>> Constraint::enumerate(std::span<const std::size_t> domain_sizes) const {
  if (const auto* t = std::get_if<AllowedTuples>(&relation)) return t->tuples;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tuple(domain_sizes.size(), 0);
  for (auto n : domain_sizes) {
    if (n == 0) return out;
  }
  while (true) {
    if (allows(tuple)) out.push_back(tuple);
    std::size_t pos = tuple.size();
    while (pos > 0) {
      --pos;
      if (++tuple[pos] < domain_sizes[pos]) break;
      tuple[pos] = 0;
      if (pos == 0) return out;
    }
    if (tuple.empty()) return out;
  }
}

std::size_t CspInstance::state_var(std::size_t fluent, std::size_t step) const {
  return step * (fluent_labels.size() + 1) + fluent;
}

std::size_t CspInstance::action_var(std::size_t step) const {
  return step * (fluent_labels.size() + 1) + fluent_labels.size();
}

std::string CspInstance::value_label(std::size_t var, std::size_t value) const {
  if (variables[var].kind == VariableKind::action) return action_labels.at(value);
  return value == kTrue ? "true" : "false";
}

std::string CspInstance::variable_label(std::size_t var) const {
  const auto& v = variables[var];
  if (v.kind == VariableKind::action) return "a[" + std::to_string(v.step) + "]";
  return fluent_labels[v.fluent] + "[" + std::to_string(v.step) + "]";
}

void CspInstance::check() const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].id != i) throw ModelError("variable ids must be dense and ordered");
  }
  for (const auto& con : constraints) {
    for (auto v : con.scope) {
      if (v >= variables.size()) throw ModelError("constraint mentions undeclared variable " + std::to_string(v));
    }
    std::size_t arity = arity_of(con.relation);
    if (arity != 0 && arity != con.scope.size()) throw ModelError("relation arity does not match its scope");
    if (const auto* t = std::get_if<AllowedTuples>(&con.relation)) {
      for (const auto& tuple : t->tuples) {
        if (tuple.size() != con.scope.size()) throw ModelError("allowed tuple has the wrong arity");
        for (std::size_t j = 0; j < tuple.size(); ++j) {
          if (tuple[j] >= variables[con.scope[j]].domain_size) throw ModelError("allowed tuple value outside domain");
        }
      }
    }
  }
}

bool Assignment::complete() const {
  return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

namespace {

/// Values of the scope, or nullopt if some variable is unassigned.
std::optional<std::vector<std::size_t>> scope_values(const Constraint& con, const Assignment& a) {
  std::vector<std::size_t> out;
  out.reserve(con.scope.size());
  for (auto v : con.scope) {
    if (!a.values[v]) return std::nullopt;
    out.push_back(*a.values[v]);
  }
  return out;
}

std::vector<std::vector<std::size_t>> incidence(const CspInstance& c) {
  std::vector<std::vector<std::size_t>> out(c.variables.size());
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    for (auto v : c.constraints[i].scope) out[v].push_back(i);
  }
  return out;
}

using Trail = std::vector<std::pair<std::size_t, std::size_t>>;

/// Revises the constraints incident to `var`. Fully assigned constraints
/// are checked; constraints with one unassigned variable prune it.
bool propagate(const CspInstance& c, const std::vector<std::size_t>& incident, const Assignment& a, Domains& d,
               Trail* trail) {
  std::vector<std::size_t> tuple;
  for (auto ci : incident) {
    const auto& con = c.constraints[ci];
    std::size_t open = con.scope.size();
    std::size_t unassigned = 0;
    tuple.assign(con.scope.size(), 0);
    for (std::size_t j = 0; j < con.scope.size(); ++j) {
      if (auto v = a.values[con.scope[j]]) {
        tuple[j] = *v;
      } else {
        if (unassigned++ == 0) open = j;
      }
    }
    if (unassigned == 0) {
      if (!con.allows(tuple)) return false;
      continue;
    }
    if (unassigned > 1) continue;
    std::size_t u = con.scope[open];
    auto& alive = d.alive[u];
    bool any = false;
    for (std::size_t w = 0; w < alive.size(); ++w) {
      if (!alive[w]) continue;
      tuple[open] = w;
      if (con.allows(tuple)) {
        any = true;
      } else {
        alive[w] = 0;
        if (trail) trail->emplace_back(u, w);
      }
    }
    if (!any) return false;
  }
  return true;
}

}  // namespace

bool consistent(const CspInstance& c, const Assignment& a) {
  for (const auto& con : c.constraints) {
    auto vals = scope_values(con, a);
    if (vals && !con.allows(*vals)) return false;
  }
  return true;
}

std::size_t conflicts(const CspInstance& c, const Assignment& a) {
  std::size_t n = 0;
  for (const auto& con : c.constraints) {
    auto vals = scope_values(con, a);
    if (vals && !con.allows(*vals)) ++n;
  }
  return n;
}

CspInstance encode(const ClassicalProblem& p, std::size_t k) {
  CspInstance c;
  c.horizon = k;
  const std::size_t n = p.fluents().size();
  const std::size_t m = p.actions().size();
  for (const auto& f : p.fluents()) c.fluent_labels.push_back(to_string(f));
  for (const auto& a : p.actions()) c.action_labels.push_back(to_string(a));

  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t j = 0; j < n; ++j) c.variables.push_back({c.variables.size(), VariableKind::state, i, j, 2});
    if (i < k) c.variables.push_back({c.variables.size(), VariableKind::action, i, 0, m});
  }

  auto index = [&](const GroundAtom& atom) { return *p.fluent_index(atom); };
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t v = p.init().holds(p.fluents()[j]) ? kTrue : kFalse;
    c.constraints.push_back({{c.state_var(j, 0)}, FixedValue{v}, ConstraintRole::init});
  }
  for (const auto& g : p.goal().positive()) {
    c.constraints.push_back({{c.state_var(index(g), k)}, FixedValue{kTrue}, ConstraintRole::goal});
  }
  for (const auto& g : p.goal().negative()) {
    c.constraints.push_back({{c.state_var(index(g), k)}, FixedValue{kFalse}, ConstraintRole::goal});
  }

  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t av = c.action_var(i);
    for (std::size_t ai = 0; ai < m; ++ai) {
      const auto& a = p.actions()[ai];
      for (const auto& q : a.pre_pos()) {
        c.constraints.push_back({{av, c.state_var(index(q), i)}, ActionImplies{ai, kTrue}, ConstraintRole::precondition});
      }
      for (const auto& q : a.pre_neg()) {
        c.constraints.push_back({{av, c.state_var(index(q), i)}, ActionImplies{ai, kFalse}, ConstraintRole::precondition});
      }
      for (const auto& q : a.add()) {
        c.constraints.push_back({{av, c.state_var(index(q), i + 1)}, ActionImplies{ai, kTrue}, ConstraintRole::effect});
      }
      for (const auto& q : a.del()) {
        c.constraints.push_back({{av, c.state_var(index(q), i + 1)}, ActionImplies{ai, kFalse}, ConstraintRole::effect});
      }
      for (std::size_t j = 0; j < n; ++j) {
        const auto& f = p.fluents()[j];
        if (a.add().contains(f) || a.del().contains(f)) continue;
        c.constraints.push_back({{av, c.state_var(j, i), c.state_var(j, i + 1)}, ActionFrame{ai}, ConstraintRole::frame});
      }
    }
  }
  return c;
}

Domains Domains::full(const CspInstance& c) {
  Domains d;
  for (const auto& v : c.variables) d.alive.emplace_back(v.domain_size, 1);
  return d;
}

std::size_t Domains::size(std::size_t var) const {
  return static_cast<std::size_t>(std::count(alive[var].begin(), alive[var].end(), 1));
}

std::vector<std::size_t> Domains::values(std::size_t var) const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < alive[var].size(); ++w) {
    if (alive[var][w]) out.push_back(w);
  }
  return out;
}

std::optional<Domains> forward_check(const CspInstance& c, const Assignment& partial, const Domains& domains,
                                     std::size_t just_assigned) {
  std::vector<std::size_t> incident;
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    const auto& s = c.constraints[i].scope;
    if (std::find(s.begin(), s.end(), just_assigned) != s.end()) incident.push_back(i);
  }
  Domains out = domains;
  if (!propagate(c, incident, partial, out, nullptr)) return std::nullopt;
  return out;
}

namespace {

class Backtracker {
public:
  Backtracker(const CspInstance& c, bool fc, std::uint64_t budget)
      : c_(c), fc_(fc), budget_(budget), incident_(incidence(c)), a_(c.variables.size()), d_(Domains::full(c)) {}

  SolveResult run() {
    if (fc_ && !node_consistency()) return {Unsat{}, stats_};
    switch (search(0)) {
      case Status::sat: return {a_, stats_};
      case Status::budget: return {BudgetExhausted{}, stats_};
      case Status::unsat: break;
    }
    return {Unsat{}, stats_};
  }

private:
  enum class Status { sat, unsat, budget };

  bool node_consistency() {
    for (const auto& con : c_.constraints) {
      if (con.scope.size() != 1) continue;
      auto& alive = d_.alive[con.scope[0]];
      bool any = false;
      for (std::size_t w = 0; w < alive.size(); ++w) {
        std::size_t value = w;
        if (!con.allows(std::span<const std::size_t>(&value, 1))) alive[w] = 0;
        any = any || alive[w];
      }
      if (!any) return false;
    }
    return true;
  }

  Status search(std::size_t var) {
    if (var == c_.variables.size()) return Status::sat;
    for (std::size_t w = 0; w < d_.alive[var].size(); ++w) {
      if (!d_.alive[var][w]) continue;
      if (stats_.nodes >= budget_) return Status::budget;
      ++stats_.nodes;
      a_.values[var] = w;
      std::size_t mark = trail_.size();
      bool ok = fc_ ? propagate(c_, incident_[var], a_, d_, &trail_) : check_assigned(var);
      if (ok) {
        Status s = search(var + 1);
        if (s != Status::unsat) return s;
      }
      while (trail_.size() > mark) {
        auto [u, value] = trail_.back();
        trail_.pop_back();
        d_.alive[u][value] = 1;
      }
      a_.values[var].reset();
      ++stats_.backtracks;
    }
    return Status::unsat;
  }

  bool check_assigned(std::size_t var) const {
    for (auto ci : incident_[var]) {
      auto vals = scope_values(c_.constraints[ci], a_);
      if (vals && !c_.constraints[ci].allows(*vals)) return false;
    }
    return true;
  }

  const CspInstance& c_;
  bool fc_;
  std::uint64_t budget_;
  std::vector<std::vector<std::size_t>> incident_;
  Assignment a_;
  Domains d_;
  Trail trail_;
  SolveStatistics stats_;
};

}  // namespace

SolveResult solve_backtracking(const CspInstance& c, bool use_forward_checking, std::uint64_t node_budget) {
  c.check();
  return Backtracker(c, use_forward_checking, node_budget).run();
}

constexpr std::uint64_t kWalkOneIn = 10;

LocalSearchResult min_conflicts(const CspInstance& c, std::uint64_t max_steps, std::uint64_t seed) {
  c.check();
  std::mt19937_64 rng(seed);
  Assignment a(c.variables.size());
  for (const auto& v : c.variables) {
    if (v.domain_size == 0) return {Timeout{c.constraints.size()}, 0};
    a.values[v.id] = rng() % v.domain_size;
  }
  auto incident = incidence(c);
  auto violated = [&](std::size_t ci) { return !c.constraints[ci].allows(*scope_values(c.constraints[ci], a)); };

  std::size_t best = c.constraints.size();
  for (std::uint64_t step = 0;; ++step) {
    std::vector<std::size_t> conflicted;
    std::size_t count = 0;
    for (std::size_t ci = 0; ci < c.constraints.size(); ++ci) {
      if (!violated(ci)) continue;
      ++count;
      for (auto v : c.constraints[ci].scope) conflicted.push_back(v);
    }
    if (count == 0) return {a, step};
    best = std::min(best, count);
    if (step == max_steps) return {Timeout{best}, step};

    std::sort(conflicted.begin(), conflicted.end());
    conflicted.erase(std::unique(conflicted.begin(), conflicted.end()), conflicted.end());
    std::size_t var = conflicted[rng() % conflicted.size()];

    // Random walk step: escapes minima where the current value is the
    // unique best and a greedy move would change nothing.
    if (rng() % kWalkOneIn == 0) {
      a.values[var] = rng() % c.variables[var].domain_size;
      continue;
    }

    std::vector<std::size_t> ties;
    std::size_t fewest = SIZE_MAX;
    for (std::size_t w = 0; w < c.variables[var].domain_size; ++w) {
      a.values[var] = w;
      std::size_t n = 0;
      for (auto ci : incident[var]) n += violated(ci);
      if (n < fewest) {
        fewest = n;
        ties.clear();
      }
      if (n == fewest) ties.push_back(w);
    }
    a.values[var] = ties[rng() % ties.size()];
  }
}

Plan decode_plan(const CspInstance& c, const Assignment& a, const ClassicalProblem& p) {
  if (a.values.size() != c.variables.size() || !a.complete()) throw DecodeMismatch("assignment is not complete");
  if (c.action_labels.size() != p.actions().size()) throw DecodeMismatch("instance was not encoded from this problem");
  Plan plan;
  for (std::size_t i = 0; i < c.horizon; ++i) plan.push_back(p.actions().at(*a.values[c.action_var(i)]));
  State s = p.init();
  try {
    s = apply_sequence(s, plan);
  } catch (const NotApplicableAt& e) {
    throw DecodeMismatch("decoded step " + std::to_string(e.index) + " is not applicable");
  }
  if (!satisfies(s, p.goal())) throw DecodeMismatch("decoded plan does not reach the goal");
  return plan;
}

SearchResult plan_bounded(const ClassicalProblem& p, std::size_t k_max, const BoundedOptions& options) {
  auto start = std::chrono::steady_clock::now();
  SearchResult result{Unsolvable{}, {}};
  bool incomplete = false;
  for (std::size_t k = 0; k <= k_max; ++k) {
    CspInstance inst = encode(p, k);
    result.stats.generated += inst.variables.size();
    std::optional<Assignment> found;
    if (options.method == Method::backtracking) {
      auto r = solve_backtracking(inst, options.forward_checking, options.node_budget);
      result.stats.expanded += r.stats.nodes;
      if (std::holds_alternative<BudgetExhausted>(r.outcome)) {
        result.outcome = BudgetExhausted{};
        break;
      }
      if (r.satisfiable()) found = r.assignment();
    } else {
      auto r = min_conflicts(inst, options.max_steps, options.seed + k);
      result.stats.expanded += r.steps;
      if (r.solved()) {
        found = std::get<Assignment>(r.outcome);
      } else {
        incomplete = true;
      }
    }
    if (found) {
      result.outcome = decode_plan(inst, *found, p);
      break;
    }
  }
  if (incomplete && result.unsolvable()) result.outcome = BudgetExhausted{};
  result.stats.duration = std::chrono::steady_clock::now() - start;
  return result;
}

std::string export_listing(const CspInstance& c) {
  std::ostringstream out;
  out << "csp-listing 1\n";
  out << "horizon " << c.horizon << "\n";
  out << "variables " << c.variables.size() << "\n";
  out << "constraints " << c.constraints.size() << "\n";
  for (const auto& v : c.variables) {
    out << "v " << v.id << ' ' << (v.kind == VariableKind::state ? "state" : "action") << ' ' << c.variable_label(v.id)
        << " [";
    for (std::size_t w = 0; w < v.domain_size; ++w) out << (w ? " " : "") << c.value_label(v.id, w);
    out << "]\n";
  }
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    const auto& con = c.constraints[i];
    std::vector<std::size_t> sizes;
    out << "c " << i << ' ' << to_string(con.role) << " [";
    for (std::size_t j = 0; j < con.scope.size(); ++j) {
      out << (j ? " " : "") << con.scope[j];
      sizes.push_back(c.variables[con.scope[j]].domain_size);
    }
    out << "] {";
    bool first = true;
    for (const auto& t : con.enumerate(sizes)) {
      out << (first ? "" : " ") << '(';
      for (std::size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << t[j];
      out << ')';
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace plankit::csp
