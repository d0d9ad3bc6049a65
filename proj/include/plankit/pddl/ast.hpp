#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "plankit/diagnostics.hpp"
#include "plankit/symbol.hpp"

namespace plankit::pddl {

// Syntax trees produced by the parser. Spans record where each node came
// from; equality is structural and ignores spans, so a printed and
// re-parsed tree compares equal to the original.

Symbol object_type();  // built-in root type `object`

/// Variable (name keeps its leading '?') or constant.
struct Term {
  Symbol name;
  bool variable = false;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Predicate or task applied to terms: `(in ?a ?r)`, `(leave-home)`.
struct Atom {
  Symbol head;
  std::vector<Term> args;
  Span span;

  friend bool operator==(const Atom& a, const Atom& b) { return a.head == b.head && a.args == b.args; }
};

struct Literal {
  bool positive = true;
  Atom atom;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// `name - type` entry of a typed list; untyped entries get `object`.
struct TypedName {
  Symbol name;
  Symbol type;
  Span span;

  friend bool operator==(const TypedName& a, const TypedName& b) { return a.name == b.name && a.type == b.type; }
};

struct TypeDecl {
  Symbol name;
  Symbol parent;
  Span span;

  friend bool operator==(const TypeDecl& a, const TypeDecl& b) { return a.name == b.name && a.parent == b.parent; }
};

struct PredicateDecl {
  Symbol name;
  std::vector<TypedName> params;
  Span span;

  friend bool operator==(const PredicateDecl& a, const PredicateDecl& b) {
    return a.name == b.name && a.params == b.params;
  }
};

struct ActionSchema {
  Symbol name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;  // conjunction
  std::vector<Literal> effect;        // conjunction; negative literals delete
  Span span;

  friend bool operator==(const ActionSchema& a, const ActionSchema& b) {
    return std::tie(a.name, a.params, a.precondition, a.effect) == std::tie(b.name, b.params, b.precondition, b.effect);
  }
};

/// Compound task declaration, `(:task name :parameters (...))`.
struct TaskDecl {
  Symbol name;
  std::vector<TypedName> params;
  Span span;

  friend bool operator==(const TaskDecl& a, const TaskDecl& b) { return a.name == b.name && a.params == b.params; }
};

struct MethodDecl {
  Symbol name;
  std::vector<TypedName> params;
  Atom task;
  std::vector<Literal> precondition;
  std::vector<Atom> subtasks;  // totally ordered
  Span span;

  friend bool operator==(const MethodDecl& a, const MethodDecl& b) {
    return std::tie(a.name, a.params, a.task, a.precondition, a.subtasks) ==
           std::tie(b.name, b.params, b.task, b.precondition, b.subtasks);
  }
};

struct DomainAst {
  Symbol name;
  std::vector<Symbol> requirements;
  std::vector<TypeDecl> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;
  std::vector<TaskDecl> tasks;
  std::vector<MethodDecl> methods;
  Span span;

  const PredicateDecl* find_predicate(Symbol name) const;
  const ActionSchema* find_action(Symbol name) const;
  const TaskDecl* find_task(Symbol name) const;
  bool typed() const { return !types.empty(); }

  friend bool operator==(const DomainAst& a, const DomainAst& b) {
    return std::tie(a.name, a.requirements, a.types, a.constants, a.predicates, a.actions, a.tasks, a.methods) ==
           std::tie(b.name, b.requirements, b.types, b.constants, b.predicates, b.actions, b.tasks, b.methods);
  }
};

struct ProblemAst {
  Symbol name;
  Symbol domain_name;
  std::vector<Symbol> requirements;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Literal> goal;
  std::optional<std::vector<Atom>> initial_tasks;  // HTN extension `(:htn ...)`
  Span span;
  Span domain_name_span;

  friend bool operator==(const ProblemAst& a, const ProblemAst& b) {
    return std::tie(a.name, a.domain_name, a.requirements, a.objects, a.init, a.goal, a.initial_tasks) ==
           std::tie(b.name, b.domain_name, b.requirements, b.objects, b.init, b.goal, b.initial_tasks);
  }
};

}  // namespace plankit::pddl
