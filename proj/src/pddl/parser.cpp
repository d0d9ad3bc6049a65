#include "plankit/pddl/parser.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "plankit/pddl/lexer.hpp"
#include "plankit/pddl/types.hpp"

namespace plankit::pddl {

namespace {

struct SExpr {
  const Token* token = nullptr;  // set for leaves
  std::vector<SExpr> items;      // children of a list
  Span span;

  bool is_list() const { return token == nullptr; }
  bool is(TokenKind kind) const { return token && token->kind == kind; }
  bool is_word(std::string_view word) const {
    return token && token->kind == TokenKind::identifier && normalize_identifier(token->text) == word;
  }
  bool is_keyword(std::string_view kw) const {
    return token && token->kind == TokenKind::keyword && normalize_identifier(token->text) == kw;
  }
  /// Identifier at the head of a list.
  const Token* head() const {
    if (!is_list() || items.empty() || !items[0].is(TokenKind::identifier)) return nullptr;
    return items[0].token;
  }
};

const std::set<std::string, std::less<>>& unsupported_connectives() {
  static const std::set<std::string, std::less<>> words = {
      "or", "imply", "forall", "exists", "when", "either", "increase", "decrease", "assign", "scale-up", "scale-down",
      "preference"};
  return words;
}

class Reader {
public:
  Reader(std::string_view text, ParseOptions options) : text_(text), map_(text), options_(options) {}

  std::vector<Diagnostic>& diagnostics() { return diags_; }

  bool read_forms(std::vector<SExpr>& out) {
    try {
      tokens_ = tokenize(text_);
    } catch (const LexError& e) {
      error(DiagnosticCode::lex_error, e.what(), e.span);
      return false;
    }
    std::size_t pos = 0;
    while (pos < tokens_.size()) {
      if (tokens_[pos].kind == TokenKind::rparen) {
        error(DiagnosticCode::syntax_error, "unbalanced parentheses: unexpected ')'", tokens_[pos].span);
        ++pos;
        continue;
      }
      out.push_back(read(pos));
    }
    return !has_errors(diags_);
  }

  void error(DiagnosticCode code, std::string message, Span span, std::optional<Span> related = {}) {
    diags_.push_back({Severity::error, code, std::move(message), span, related});
  }
  void warning(DiagnosticCode code, std::string message, Span span, std::optional<Span> related = {}) {
    diags_.push_back({Severity::warning, code, std::move(message), span, related});
  }

  Span end_span() const { return text_.empty() ? Span{} : map_.span(text_.size() - 1, 1); }

  // --- shared grammar pieces -------------------------------------------------

  std::optional<Symbol> expect_name(const SExpr* e, std::string_view what, Span fallback) {
    if (!e || !e->is(TokenKind::identifier)) {
      error(DiagnosticCode::syntax_error, "expected " + std::string(what), e ? e->span : fallback);
      return std::nullopt;
    }
    return Symbol(e->token->text);
  }

  /// `a b - t c - u d` or `?x ?y - t`; trailing names default to object.
  bool typed_list(const std::vector<SExpr>& items, std::size_t from, bool variables, std::vector<TypedName>& out) {
    TokenKind want = variables ? TokenKind::variable : TokenKind::identifier;
    std::vector<TypedName> pending;
    bool ok = true;
    for (std::size_t i = from; i < items.size(); ++i) {
      const SExpr& e = items[i];
      if (e.is(want)) {
        pending.push_back({Symbol(e.token->text), object_type(), e.span});
      } else if (e.is(TokenKind::dash)) {
        if (pending.empty()) {
          error(DiagnosticCode::syntax_error, "'-' must follow at least one name", e.span);
          ok = false;
        }
        if (i + 1 >= items.size()) {
          error(DiagnosticCode::syntax_error, "expected a type after '-'", e.span);
          return false;
        }
        const SExpr& t = items[++i];
        if (t.is_list() && t.head() && normalize_identifier(t.head()->text) == "either") {
          error(DiagnosticCode::unsupported_construct, "unsupported construct 'either' (union types)", t.span);
          return false;
        }
        if (!t.is(TokenKind::identifier)) {
          error(DiagnosticCode::syntax_error, "expected a type name after '-'", t.span);
          return false;
        }
        for (auto& p : pending) p.type = Symbol(t.token->text);
        out.insert(out.end(), pending.begin(), pending.end());
        pending.clear();
      } else {
        error(DiagnosticCode::syntax_error,
              std::string("expected ") + (variables ? "a variable" : "a name") + " in typed list", e.span);
        ok = false;
      }
    }
    out.insert(out.end(), pending.begin(), pending.end());
    return ok;
  }

  std::optional<Atom> atom(const SExpr& e) {
    if (!e.is_list()) {
      error(DiagnosticCode::syntax_error, "expected a parenthesized atom", e.span);
      return std::nullopt;
    }
    const Token* h = e.head();
    if (!h) {
      error(DiagnosticCode::syntax_error, "expected a predicate or task name", e.items.empty() ? e.span : e.items[0].span);
      return std::nullopt;
    }
    if (unsupported_connectives().count(normalize_identifier(h->text))) {
      error(DiagnosticCode::unsupported_construct,
            "unsupported construct '" + normalize_identifier(h->text) + "' (only conjunctions of literals are supported)",
            e.span);
      return std::nullopt;
    }
    Atom a{Symbol(h->text), {}, e.span};
    bool ok = true;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& arg = e.items[i];
      if (arg.is(TokenKind::variable)) {
        a.args.push_back({Symbol(arg.token->text), true});
      } else if (arg.is(TokenKind::identifier)) {
        a.args.push_back({Symbol(arg.token->text), false});
      } else {
        error(DiagnosticCode::syntax_error, "expected a variable or constant as argument", arg.span);
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return a;
  }

  /// Conjunction of literals: `()`, `(and ...)`, `(not atom)`, or an atom.
  bool conjunction(const SExpr& e, std::vector<Literal>& out) {
    if (!e.is_list()) {
      error(DiagnosticCode::syntax_error, "expected a parenthesized formula", e.span);
      return false;
    }
    if (e.items.empty()) return true;
    const Token* h = e.head();
    if (h) {
      std::string word = normalize_identifier(h->text);
      if (word == "and") {
        bool ok = true;
        for (std::size_t i = 1; i < e.items.size(); ++i) ok = conjunction(e.items[i], out) && ok;
        return ok;
      }
      if (word == "not") {
        if (e.items.size() != 2) {
          error(DiagnosticCode::syntax_error, "'not' takes exactly one atom", e.span);
          return false;
        }
        const Token* inner = e.items[1].head();
        if (inner) {
          std::string w = normalize_identifier(inner->text);
          if (w == "and" || w == "not" || unsupported_connectives().count(w)) {
            error(DiagnosticCode::unsupported_construct, "unsupported construct: negation of '" + w + "'", e.span);
            return false;
          }
        }
        auto a = atom(e.items[1]);
        if (!a) return false;
        out.push_back({false, std::move(*a)});
        return true;
      }
    }
    auto a = atom(e);
    if (!a) return false;
    out.push_back({true, std::move(*a)});
    return true;
  }

  /// `()`, a single task, or `(and t1 t2 ...)`.
  bool task_list(const SExpr& e, std::vector<Atom>& out) {
    if (!e.is_list()) {
      error(DiagnosticCode::syntax_error, "expected a parenthesized task list", e.span);
      return false;
    }
    if (e.items.empty()) return true;
    const Token* h = e.head();
    if (h && normalize_identifier(h->text) == "and") {
      bool ok = true;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        auto t = atom(e.items[i]);
        if (t) out.push_back(std::move(*t));
        ok = ok && t.has_value();
      }
      return ok;
    }
    auto t = atom(e);
    if (!t) return false;
    out.push_back(std::move(*t));
    return true;
  }

  /// Reads `:key value` pairs starting at `from`; reports unknown keys.
  std::unordered_map<std::string, const SExpr*> properties(const SExpr& form, std::size_t from,
                                                           const std::set<std::string, std::less<>>& allowed) {
    std::unordered_map<std::string, const SExpr*> props;
    for (std::size_t i = from; i < form.items.size(); ++i) {
      const SExpr& key = form.items[i];
      if (!key.is(TokenKind::keyword)) {
        error(DiagnosticCode::syntax_error, "expected a keyword such as :parameters", key.span);
        continue;
      }
      std::string k = normalize_identifier(key.token->text);
      if (i + 1 >= form.items.size()) {
        error(DiagnosticCode::syntax_error, "missing value for " + k, key.span);
        break;
      }
      const SExpr& value = form.items[++i];
      if (!allowed.count(k)) {
        bool partial = k == ":subtasks" || k == ":tasks" || k == ":ordering" || k == ":constraints";
        error(partial ? DiagnosticCode::unsupported_construct : DiagnosticCode::syntax_error,
              partial ? "unsupported construct " + k + " (only totally ordered task networks are supported)"
                      : "unexpected " + k,
              key.span);
        continue;
      }
      if (props.count(k)) {
        error(DiagnosticCode::duplicate_definition, "duplicate " + k, key.span);
        continue;
      }
      props[k] = &value;
    }
    return props;
  }

  bool parameters(const SExpr* e, std::vector<TypedName>& out) {
    if (!e) return true;
    if (!e->is_list()) {
      error(DiagnosticCode::syntax_error, "expected a parenthesized parameter list", e->span);
      return false;
    }
    return typed_list(e->items, 0, true, out);
  }

  bool allow_htn() const { return options_.allow_htn; }

private:
  SExpr read(std::size_t& pos) {
    const Token& t = tokens_[pos++];
    if (t.kind != TokenKind::lparen) return SExpr{&t, {}, t.span};
    SExpr list;
    while (pos < tokens_.size() && tokens_[pos].kind != TokenKind::rparen) list.items.push_back(read(pos));
    if (pos >= tokens_.size()) {
      error(DiagnosticCode::syntax_error, "unbalanced parentheses: '(' is never closed", t.span);
      list.span = map_.span(t.span.offset, text_.size() - t.span.offset);
      return list;
    }
    const Token& close = tokens_[pos++];
    list.span = map_.span(t.span.offset, close.span.offset + 1 - t.span.offset);
    return list;
  }

  std::string_view text_;
  SourceMap map_;
  ParseOptions options_;
  std::vector<Token> tokens_;
  std::vector<Diagnostic> diags_;
};

/// Checks the `(define (<kind> name) ...)` envelope and returns the name.
const SExpr* open_define(Reader& r, const std::vector<SExpr>& forms, std::string_view kind, Symbol& name) {
  if (forms.empty()) {
    r.error(DiagnosticCode::syntax_error, "empty input: expected (define (" + std::string(kind) + " <name>) ...)", r.end_span());
    return nullptr;
  }
  for (std::size_t i = 1; i < forms.size(); ++i) {
    r.error(DiagnosticCode::syntax_error, "unexpected content after the define form", forms[i].span);
  }
  const SExpr& def = forms[0];
  if (!def.is_list() || def.items.empty() || !def.items[0].is_word("define")) {
    r.error(DiagnosticCode::syntax_error, "expected (define ...)", def.span);
    return nullptr;
  }
  if (def.items.size() < 2 || !def.items[1].is_list() || def.items[1].items.size() != 2 ||
      !def.items[1].items[0].is_word(kind) || !def.items[1].items[1].is(TokenKind::identifier)) {
    r.error(DiagnosticCode::syntax_error, "expected (" + std::string(kind) + " <name>)",
            def.items.size() > 1 ? def.items[1].span : def.span);
    return nullptr;
  }
  name = Symbol(def.items[1].items[1].token->text);
  return &def;
}

void read_requirements(Reader& r, const SExpr& form, std::vector<Symbol>& out) {
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    if (!form.items[i].is(TokenKind::keyword)) {
      r.error(DiagnosticCode::syntax_error, "expected a requirement keyword", form.items[i].span);
      continue;
    }
    out.emplace_back(form.items[i].token->text);
    // Anything beyond these is recorded but not acted on; the constructs
    // themselves are rejected where they appear.
    static const std::set<std::string> known{":strips", ":typing", ":negative-preconditions", ":hierarchy",
                                             ":method-preconditions"};
    if (!known.count(out.back().text())) {
      r.warning(DiagnosticCode::ignored_requirements, "requirement " + out.back().text() + " is not supported and is ignored",
                form.items[i].span);
    }
  }
}

bool is_unsupported_section(std::string_view kw) {
  return kw == ":functions" || kw == ":durative-action" || kw == ":derived" || kw == ":constraints" ||
         kw == ":process" || kw == ":event" || kw == ":metric";
}

// --- domain semantic checks -----------------------------------------------------

class DomainChecker {
public:
  DomainChecker(Reader& r, const DomainAst& d) : r_(r), d_(d) {}

  void run() {
    types_ = TypeHierarchy::build(d_.types, r_.diagnostics());

    for (const auto& t : d_.types) {
      if (!types_.contains(t.parent)) unknown_type(t.parent, t.span);
    }

    std::unordered_map<Symbol, const TypedName*> constants;
    for (const auto& c : d_.constants) {
      check_type(c);
      if (auto [it, fresh] = constants.emplace(c.name, &c); !fresh) {
        duplicate("constant", c.name, c.span, it->second->span, it->second->type == c.type);
      } else {
        constant_types_[c.name] = c.type;
      }
    }

    std::unordered_map<Symbol, const PredicateDecl*> predicates;
    for (const auto& p : d_.predicates) {
      check_params(p.params);
      if (auto [it, fresh] = predicates.emplace(p.name, &p); !fresh) {
        duplicate("predicate", p.name, p.span, it->second->span, *it->second == p);
      }
    }

    std::unordered_map<Symbol, Span> operators;
    for (const auto& a : d_.actions) {
      if (auto [it, fresh] = operators.emplace(a.name, a.span); !fresh) {
        duplicate("action", a.name, a.span, it->second, false);
      }
      auto scope = check_params(a.params);
      for (const auto& l : a.precondition) check_atom(l.atom, scope, Kind::predicate);
      for (const auto& l : a.effect) check_atom(l.atom, scope, Kind::predicate);
      for (const auto& l : a.effect) {
        if (!l.positive) continue;
        for (const auto& other : a.effect) {
          if (!other.positive && other.atom == l.atom) {
            r_.error(DiagnosticCode::other, "action '" + a.name.text() + "' both adds and deletes the same atom",
                     other.atom.span, l.atom.span);
          }
        }
      }
      for (const auto& l : a.precondition) {
        if (!l.positive) continue;
        for (const auto& other : a.precondition) {
          if (!other.positive && other.atom == l.atom) {
            r_.error(DiagnosticCode::other, "action '" + a.name.text() + "' requires an atom to be both true and false",
                     other.atom.span, l.atom.span);
          }
        }
      }
    }

    for (const auto& t : d_.tasks) {
      if (auto [it, fresh] = operators.emplace(t.name, t.span); !fresh) {
        duplicate("task", t.name, t.span, it->second, false);
      }
      check_params(t.params);
    }

    std::unordered_map<Symbol, Span> methods;
    std::set<Symbol> decomposed;
    for (const auto& m : d_.methods) {
      if (auto [it, fresh] = methods.emplace(m.name, m.span); !fresh) {
        duplicate("method", m.name, m.span, it->second, false);
      }
      auto scope = check_params(m.params);
      const TaskDecl* task = d_.find_task(m.task.head);
      if (!task) {
        r_.error(DiagnosticCode::unknown_task,
                 d_.find_action(m.task.head) ? "method '" + m.name.text() + "' decomposes primitive task '" + m.task.head.text() + "'"
                                             : "unknown compound task '" + m.task.head.text() + "'",
                 m.task.span);
        continue;
      }
      decomposed.insert(task->name);
      if (task->params.size() != m.task.args.size()) {
        arity(m.task, task->params.size());
        continue;
      }
      // Task-pattern variables are bound too; their type comes from the task declaration.
      for (std::size_t i = 0; i < m.task.args.size(); ++i) {
        const Term& arg = m.task.args[i];
        if (arg.variable) {
          if (!scope.count(arg.name)) scope[arg.name] = task->params[i].type;
        } else {
          check_constant(arg, task->params[i].type, m.task.span);
        }
      }
      for (const auto& l : m.precondition) check_atom(l.atom, scope, Kind::predicate);
      for (const auto& st : m.subtasks) check_atom(st, scope, Kind::task);
    }

    for (const auto& t : d_.tasks) {
      if (!decomposed.count(t.name)) {
        r_.warning(DiagnosticCode::other, "compound task '" + t.name.text() + "' has no methods and cannot be decomposed",
                   t.span);
      }
    }
  }

private:
  enum class Kind { predicate, task };

  void unknown_type(Symbol t, Span span) { r_.error(DiagnosticCode::unknown_type, "unknown type '" + t.text() + "'", span); }

  void check_type(const TypedName& tn) {
    if (!types_.contains(tn.type)) unknown_type(tn.type, tn.span);
  }

  void duplicate(std::string_view what, Symbol name, Span span, Span first, bool identical) {
    std::string msg = std::string(what) + " '" + name.text() + "' is defined twice (first at " +
                      std::to_string(first.line) + ":" + std::to_string(first.column) + ", again at " +
                      std::to_string(span.line) + ":" + std::to_string(span.column) + ")";
    if (identical) {
      r_.warning(DiagnosticCode::duplicate_definition, msg + "; identical declarations are merged", span, first);
    } else {
      r_.error(DiagnosticCode::duplicate_definition, msg, span, first);
    }
  }

  std::unordered_map<Symbol, Symbol> check_params(const std::vector<TypedName>& params) {
    std::unordered_map<Symbol, Symbol> scope;
    for (const auto& p : params) {
      check_type(p);
      if (!scope.emplace(p.name, p.type).second) {
        r_.error(DiagnosticCode::duplicate_definition, "variable '" + p.name.text() + "' is declared twice", p.span);
      }
    }
    return scope;
  }

  void arity(const Atom& a, std::size_t expected) {
    r_.error(DiagnosticCode::arity_mismatch,
             "'" + a.head.text() + "' expects " + std::to_string(expected) + " argument(s), got " +
                 std::to_string(a.args.size()),
             a.span);
  }

  void check_constant(const Term& t, Symbol expected, Span span) {
    auto it = constant_types_.find(t.name);
    if (it == constant_types_.end()) {
      r_.error(DiagnosticCode::unknown_object, "unknown constant '" + t.name.text() + "' (declare it in :constants)", span);
    } else if (types_.contains(expected) && !types_.is_subtype(it->second, expected)) {
      r_.error(DiagnosticCode::type_mismatch,
               "constant '" + t.name.text() + "' of type '" + it->second.text() + "' used where '" + expected.text() +
                   "' is required",
               span);
    }
  }

  void check_atom(const Atom& a, const std::unordered_map<Symbol, Symbol>& scope, Kind kind) {
    const std::vector<TypedName>* params = nullptr;
    if (kind == Kind::predicate) {
      if (const auto* p = d_.find_predicate(a.head)) params = &p->params;
    } else if (const auto* act = d_.find_action(a.head)) {
      params = &act->params;
    } else if (const auto* task = d_.find_task(a.head)) {
      params = &task->params;
    }
    if (!params) {
      if (kind == Kind::predicate) {
        r_.error(DiagnosticCode::unknown_predicate, "unknown predicate '" + a.head.text() + "'", a.span);
      } else {
        r_.error(DiagnosticCode::unknown_task, "unknown task '" + a.head.text() + "'", a.span);
      }
      return;
    }
    if (params->size() != a.args.size()) {
      arity(a, params->size());
      return;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const Term& arg = a.args[i];
      Symbol expected = (*params)[i].type;
      if (!arg.variable) {
        check_constant(arg, expected, a.span);
        continue;
      }
      auto it = scope.find(arg.name);
      if (it == scope.end()) {
        r_.error(DiagnosticCode::undeclared_variable, "variable '" + arg.name.text() + "' is not a parameter", a.span);
      } else if (types_.contains(it->second) && types_.contains(expected) && !types_.is_subtype(it->second, expected)) {
        r_.error(DiagnosticCode::type_mismatch,
                 "variable '" + arg.name.text() + "' of type '" + it->second.text() + "' used where '" + expected.text() +
                     "' is required",
                 a.span);
      }
    }
  }

  Reader& r_;
  const DomainAst& d_;
  TypeHierarchy types_;
  std::unordered_map<Symbol, Symbol> constant_types_;
};

void read_action(Reader& r, const SExpr& form, DomainAst& d) {
  auto name = r.expect_name(form.items.size() > 1 ? &form.items[1] : nullptr, "an action name", form.span);
  if (!name) return;
  ActionSchema a{*name, {}, {}, {}, form.span};
  auto props = r.properties(form, 2, {":parameters", ":precondition", ":effect"});
  bool ok = r.parameters(props.count(":parameters") ? props[":parameters"] : nullptr, a.params);
  if (props.count(":precondition")) ok = r.conjunction(*props[":precondition"], a.precondition) && ok;
  if (props.count(":effect")) ok = r.conjunction(*props[":effect"], a.effect) && ok;
  if (ok) d.actions.push_back(std::move(a));
}

void read_task(Reader& r, const SExpr& form, DomainAst& d) {
  auto name = r.expect_name(form.items.size() > 1 ? &form.items[1] : nullptr, "a task name", form.span);
  if (!name) return;
  TaskDecl t{*name, {}, form.span};
  auto props = r.properties(form, 2, {":parameters"});
  if (r.parameters(props.count(":parameters") ? props[":parameters"] : nullptr, t.params)) d.tasks.push_back(std::move(t));
}

void read_method(Reader& r, const SExpr& form, DomainAst& d) {
  auto name = r.expect_name(form.items.size() > 1 ? &form.items[1] : nullptr, "a method name", form.span);
  if (!name) return;
  MethodDecl m{*name, {}, {}, {}, {}, form.span};
  auto props = r.properties(form, 2, {":parameters", ":task", ":precondition", ":ordered-subtasks", ":ordered-tasks"});
  bool ok = r.parameters(props.count(":parameters") ? props[":parameters"] : nullptr, m.params);
  if (!props.count(":task")) {
    r.error(DiagnosticCode::syntax_error, "method '" + name->text() + "' lacks a :task", form.span);
    return;
  }
  auto task = r.atom(*props[":task"]);
  ok = ok && task.has_value();
  if (task) m.task = std::move(*task);
  if (props.count(":precondition")) ok = r.conjunction(*props[":precondition"], m.precondition) && ok;
  if (props.count(":ordered-subtasks") && props.count(":ordered-tasks")) {
    r.error(DiagnosticCode::duplicate_definition, "both :ordered-subtasks and :ordered-tasks given", form.span);
    return;
  }
  const SExpr* subtasks = props.count(":ordered-subtasks") ? props[":ordered-subtasks"]
                          : props.count(":ordered-tasks") ? props[":ordered-tasks"]
                                                           : nullptr;
  if (subtasks) ok = r.task_list(*subtasks, m.subtasks) && ok;
  if (ok) d.methods.push_back(std::move(m));
}

}  // namespace

const PredicateDecl* DomainAst::find_predicate(Symbol n) const {
  auto it = std::find_if(predicates.begin(), predicates.end(), [&](const auto& p) { return p.name == n; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* DomainAst::find_action(Symbol n) const {
  auto it = std::find_if(actions.begin(), actions.end(), [&](const auto& a) { return a.name == n; });
  return it == actions.end() ? nullptr : &*it;
}

const TaskDecl* DomainAst::find_task(Symbol n) const {
  auto it = std::find_if(tasks.begin(), tasks.end(), [&](const auto& t) { return t.name == n; });
  return it == tasks.end() ? nullptr : &*it;
}

Result<DomainAst> parse_domain(std::string_view text, ParseOptions options) {
  Reader r(text, options);
  std::vector<SExpr> forms;
  r.read_forms(forms);
  DomainAst d;
  const SExpr* def = nullptr;
  if (!has_errors(r.diagnostics())) def = open_define(r, forms, "domain", d.name);
  if (!def) return {std::nullopt, std::move(r.diagnostics())};
  d.span = def->span;

  for (std::size_t i = 2; i < def->items.size(); ++i) {
    const SExpr& form = def->items[i];
    if (!form.is_list() || form.items.empty() || !form.items[0].is(TokenKind::keyword)) {
      r.error(DiagnosticCode::syntax_error, "expected a section such as (:predicates ...)", form.span);
      continue;
    }
    std::string kw = normalize_identifier(form.items[0].token->text);
    if (kw == ":requirements") {
      read_requirements(r, form, d.requirements);
    } else if (kw == ":types") {
      std::vector<TypedName> entries;
      if (r.typed_list(form.items, 1, false, entries)) {
        for (const auto& e : entries) d.types.push_back({e.name, e.type, e.span});
      }
    } else if (kw == ":constants") {
      r.typed_list(form.items, 1, false, d.constants);
    } else if (kw == ":predicates") {
      for (std::size_t j = 1; j < form.items.size(); ++j) {
        const SExpr& p = form.items[j];
        const Token* h = p.head();
        if (!h) {
          r.error(DiagnosticCode::syntax_error, "expected a predicate declaration (name ?arg ...)", p.span);
          continue;
        }
        PredicateDecl decl{Symbol(h->text), {}, p.span};
        if (r.typed_list(p.items, 1, true, decl.params)) d.predicates.push_back(std::move(decl));
      }
    } else if (kw == ":action") {
      read_action(r, form, d);
    } else if ((kw == ":task" || kw == ":method") && !r.allow_htn()) {
      r.error(DiagnosticCode::unsupported_construct, "HTN section " + kw + " is only accepted by the HTN parser", form.span);
    } else if (kw == ":task") {
      read_task(r, form, d);
    } else if (kw == ":method") {
      read_method(r, form, d);
    } else if (is_unsupported_section(kw)) {
      r.error(DiagnosticCode::unsupported_construct, "unsupported construct " + kw + " (STRIPS with typing only)", form.span);
    } else {
      r.error(DiagnosticCode::syntax_error, "unknown domain section " + kw, form.span);
    }
  }

  DomainChecker(r, d).run();
  if (has_errors(r.diagnostics())) return {std::nullopt, std::move(r.diagnostics())};
  return {std::move(d), std::move(r.diagnostics())};
}

Result<ProblemAst> parse_problem(std::string_view text, ParseOptions options) {
  Reader r(text, options);
  std::vector<SExpr> forms;
  r.read_forms(forms);
  ProblemAst p;
  const SExpr* def = nullptr;
  if (!has_errors(r.diagnostics())) def = open_define(r, forms, "problem", p.name);
  if (!def) return {std::nullopt, std::move(r.diagnostics())};
  p.span = def->span;

  bool saw_domain = false;
  for (std::size_t i = 2; i < def->items.size(); ++i) {
    const SExpr& form = def->items[i];
    if (!form.is_list() || form.items.empty() || !form.items[0].is(TokenKind::keyword)) {
      r.error(DiagnosticCode::syntax_error, "expected a section such as (:init ...)", form.span);
      continue;
    }
    std::string kw = normalize_identifier(form.items[0].token->text);
    if (kw == ":domain") {
      if (form.items.size() != 2 || !form.items[1].is(TokenKind::identifier)) {
        r.error(DiagnosticCode::syntax_error, "expected (:domain <name>)", form.span);
        continue;
      }
      p.domain_name = Symbol(form.items[1].token->text);
      p.domain_name_span = form.items[1].span;
      saw_domain = true;
    } else if (kw == ":requirements") {
      read_requirements(r, form, p.requirements);
    } else if (kw == ":objects") {
      r.typed_list(form.items, 1, false, p.objects);
    } else if (kw == ":init") {
      for (std::size_t j = 1; j < form.items.size(); ++j) {
        const SExpr& e = form.items[j];
        if (e.head() && normalize_identifier(e.head()->text) == "not") {
          r.error(DiagnosticCode::unsupported_construct,
                  "negative literal in :init (absent atoms are already false)", e.span);
          continue;
        }
        auto a = r.atom(e);
        if (!a) continue;
        if (std::any_of(a->args.begin(), a->args.end(), [](const Term& t) { return t.variable; })) {
          r.error(DiagnosticCode::syntax_error, "initial-state atoms must be ground", a->span);
          continue;
        }
        p.init.push_back(std::move(*a));
      }
    } else if (kw == ":goal") {
      if (form.items.size() != 2) {
        r.error(DiagnosticCode::syntax_error, "expected (:goal <formula>)", form.span);
        continue;
      }
      std::vector<Literal> goal;
      if (!r.conjunction(form.items[1], goal)) continue;
      for (const auto& l : goal) {
        if (std::any_of(l.atom.args.begin(), l.atom.args.end(), [](const Term& t) { return t.variable; })) {
          r.error(DiagnosticCode::syntax_error, "goal literals must be ground", l.atom.span);
        }
      }
      p.goal = std::move(goal);
    } else if (kw == ":htn" && r.allow_htn()) {
      auto props = r.properties(form, 1, {":parameters", ":ordered-subtasks", ":ordered-tasks"});
      if (props.count(":parameters") && !(props[":parameters"]->is_list() && props[":parameters"]->items.empty())) {
        r.error(DiagnosticCode::unsupported_construct, "parameters of the initial task network are not supported",
                props[":parameters"]->span);
      }
      std::vector<Atom> tasks;
      const SExpr* list = props.count(":ordered-subtasks") ? props[":ordered-subtasks"]
                          : props.count(":ordered-tasks")  ? props[":ordered-tasks"]
                                                           : nullptr;
      if (list && r.task_list(*list, tasks)) {
        for (const auto& t : tasks) {
          if (std::any_of(t.args.begin(), t.args.end(), [](const Term& a) { return a.variable; })) {
            r.error(DiagnosticCode::syntax_error, "initial tasks must be ground", t.span);
          }
        }
      }
      p.initial_tasks = std::move(tasks);
    } else if (kw == ":htn") {
      r.error(DiagnosticCode::unsupported_construct, "HTN section :htn is only accepted by the HTN parser", form.span);
    } else if (is_unsupported_section(kw)) {
      r.error(DiagnosticCode::unsupported_construct, "unsupported construct " + kw + " (STRIPS with typing only)", form.span);
    } else {
      r.error(DiagnosticCode::syntax_error, "unknown problem section " + kw, form.span);
    }
  }
  if (!saw_domain) r.error(DiagnosticCode::syntax_error, "problem lacks (:domain <name>)", def->span);

  if (has_errors(r.diagnostics())) return {std::nullopt, std::move(r.diagnostics())};
  return {std::move(p), std::move(r.diagnostics())};
}

FileKind detect_kind(std::string_view text) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(text);
  } catch (const LexError&) {
    // Fall back to the prefix before the bad character.
  }
  for (std::size_t i = 0; i + 3 < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::lparen && tokens[i + 1].kind == TokenKind::identifier &&
        normalize_identifier(tokens[i + 1].text) == "define" && tokens[i + 2].kind == TokenKind::lparen) {
      std::string kind = normalize_identifier(tokens[i + 3].text);
      if (kind == "domain") return FileKind::domain;
      if (kind == "problem") return FileKind::problem;
      return FileKind::unknown;
    }
  }
  return FileKind::unknown;
}

}  // namespace plankit::pddl
