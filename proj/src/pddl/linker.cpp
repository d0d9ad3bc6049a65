#include "plankit/pddl/linker.hpp"

#include <algorithm>

#include "plankit/pddl/printer.hpp"

namespace plankit::pddl {

std::optional<Symbol> LinkedProblem::type_of(Symbol object) const {
  auto it = index_.find(object);
  if (it == index_.end()) return std::nullopt;
  return objects[it->second].type;
}

std::optional<std::size_t> LinkedProblem::index_of(Symbol object) const {
  auto it = index_.find(object);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void LinkedProblem::add_object(Symbol name, Symbol type) {
  index_.emplace(name, objects.size());
  objects.push_back({name, type});
}

namespace {

class Linker {
public:
  Linker(const DomainAst& d, const ProblemAst& p) {
    out_.domain = std::make_shared<const DomainAst>(d);
    out_.problem = std::make_shared<const ProblemAst>(p);
  }

  Result<LinkedProblem> run() {
    const DomainAst& d = *out_.domain;
    const ProblemAst& p = *out_.problem;
    // The domain was checked when parsed; rebuild the tree quietly.
    std::vector<Diagnostic> ignored;
    out_.types = TypeHierarchy::build(d.types, ignored);

    if (p.domain_name != d.name) {
      error(DiagnosticCode::domain_name_mismatch,
            "problem is for domain '" + p.domain_name.text() + "' but domain '" + d.name.text() + "' was given",
            p.domain_name_span);
    }

    for (const auto& c : d.constants) declare(c.name, c.type, c.span);
    for (const auto& o : p.objects) {
      if (!out_.types.contains(o.type)) {
        error(DiagnosticCode::unknown_type, "unknown type '" + o.type.text() + "'", o.span);
        continue;
      }
      declare(o.name, o.type, o.span);
    }

    // Unary atoms named after a type declare objects of that type.
    std::vector<const Atom*> facts;
    for (const auto& a : p.init) {
      bool is_type = a.head != object_type() && out_.types.contains(a.head) && d.typed();
      if (is_type && a.args.size() == 1) {
        Symbol obj = a.args[0].name;
        if (auto t = out_.type_of(obj)) {
          if (!out_.types.is_subtype(*t, a.head)) {
            error(DiagnosticCode::type_mismatch,
                  "object '" + obj.text() + "' is declared as '" + t->text() + "' but listed as '" + a.head.text() + "'",
                  a.span);
          }
        } else {
          out_.add_object(obj, a.head);
        }
        if (!d.find_predicate(a.head)) continue;
      }
      facts.push_back(&a);
    }

    // Untyped domains may introduce objects just by mentioning them.
    if (!d.typed()) {
      auto implicit = [&](const Atom& a) {
        for (const auto& t : a.args) {
          if (!t.variable && !out_.index_of(t.name)) out_.add_object(t.name, object_type());
        }
      };
      for (const Atom* a : facts) implicit(*a);
      for (const auto& l : p.goal) implicit(l.atom);
      if (p.initial_tasks) {
        for (const auto& t : *p.initial_tasks) implicit(t);
      }
    }

    std::vector<GroundAtom> init;
    for (const Atom* a : facts) {
      if (auto g = ground(*a)) init.push_back(std::move(*g));
    }
    std::vector<GroundAtom> seen;
    for (auto& g : init) {
      if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
      seen.push_back(g);
      out_.init.push_back(std::move(g));
    }

    std::vector<GroundAtom> pos, neg;
    for (const auto& l : p.goal) {
      if (auto g = ground(l.atom)) (l.positive ? pos : neg).push_back(std::move(*g));
    }
    try {
      out_.goal = Goal(AtomSet(pos), AtomSet(neg));
    } catch (const InconsistentGoal& e) {
      error(DiagnosticCode::other, e.what(), p.span);
    }

    if (p.initial_tasks) {
      for (const auto& t : *p.initial_tasks) {
        for (const auto& a : t.args) {
          if (!out_.index_of(a.name)) error(DiagnosticCode::unknown_object, "unknown object '" + a.name.text() + "'", t.span);
        }
      }
    }

    auto negative = [](const std::vector<Literal>& ls) {
      return std::any_of(ls.begin(), ls.end(), [](const Literal& l) { return !l.positive; });
    };
    out_.negative_preconditions =
        negative(p.goal) || std::any_of(d.actions.begin(), d.actions.end(), [&](const auto& a) { return negative(a.precondition); }) ||
        std::any_of(d.methods.begin(), d.methods.end(), [&](const auto& m) { return negative(m.precondition); });

    if (has_errors(diags_)) return {std::nullopt, std::move(diags_)};
    return {std::move(out_), std::move(diags_)};
  }

private:
  void error(DiagnosticCode code, std::string msg, Span span) {
    diags_.push_back({Severity::error, code, std::move(msg), span, {}});
  }

  void declare(Symbol name, Symbol type, Span span) {
    if (auto existing = out_.type_of(name)) {
      if (*existing == type) {
        diags_.push_back({Severity::warning, DiagnosticCode::duplicate_definition,
                          "object '" + name.text() + "' declared twice", span, {}});
      } else {
        error(DiagnosticCode::duplicate_definition,
              "object '" + name.text() + "' declared as both '" + existing->text() + "' and '" + type.text() + "'", span);
      }
      return;
    }
    out_.add_object(name, type);
  }

  std::optional<GroundAtom> ground(const Atom& a) {
    const PredicateDecl* pred = out_.domain->find_predicate(a.head);
    if (!pred) {
      error(DiagnosticCode::unknown_predicate, "unknown predicate '" + a.head.text() + "'", a.span);
      return std::nullopt;
    }
    if (pred->params.size() != a.args.size()) {
      error(DiagnosticCode::arity_mismatch,
            "'" + a.head.text() + "' expects " + std::to_string(pred->params.size()) + " argument(s), got " +
                std::to_string(a.args.size()),
            a.span);
      return std::nullopt;
    }
    GroundAtom g{a.head, {}};
    bool ok = true;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      Symbol obj = a.args[i].name;
      auto t = out_.type_of(obj);
      if (!t) {
        error(DiagnosticCode::unknown_object, "unknown object '" + obj.text() + "' in " + to_string(a), a.span);
        ok = false;
      } else if (!out_.types.is_subtype(*t, pred->params[i].type)) {
        error(DiagnosticCode::type_mismatch,
              "object '" + obj.text() + "' of type '" + t->text() + "' used where '" + pred->params[i].type.text() +
                  "' is required in " + to_string(a),
              a.span);
        ok = false;
      }
      g.args.push_back(obj);
    }
    if (!ok) return std::nullopt;
    return g;
  }

  LinkedProblem out_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

Result<LinkedProblem> link(const DomainAst& domain, const ProblemAst& problem) { return Linker(domain, problem).run(); }

}  // namespace plankit::pddl
