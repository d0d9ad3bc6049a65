#include "plankit/pddl/printer.hpp"

#include <algorithm>
#include <sstream>

namespace plankit::pddl {

namespace {

/// Groups consecutive entries of equal type: `a b - t c - u`. A trailing
/// group of type object is printed bare; elsewhere `- object` is explicit,
/// since a bare name would otherwise pick up the next group's type.
std::string typed_names(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size();) {
    std::size_t j = i;
    while (j < names.size() && names[j].type == names[i].type) {
      if (!out.empty()) out += ' ';
      out += names[j].name.text();
      ++j;
    }
    if (names[i].type != object_type() || j < names.size()) out += " - " + names[i].type.text();
    i = j;
  }
  return out;
}

/// One `?x - t` per parameter. Types are left out only when every
/// parameter is an `object`; otherwise a bare name would pick up the type
/// of the next group.
std::string params(const std::vector<TypedName>& ps) {
  bool all_object = std::all_of(ps.begin(), ps.end(), [](const TypedName& p) { return p.type == object_type(); });
  std::string out;
  for (const auto& p : ps) {
    if (!out.empty()) out += ' ';
    out += p.name.text();
    if (!all_object) out += " - " + p.type.text();
  }
  return out;
}

std::string conjunction(const std::vector<Literal>& literals) {
  std::string out = "(and";
  for (const auto& l : literals) out += " " + to_string(l);
  return out + ")";
}

std::string task_list(const std::vector<Atom>& tasks) {
  std::string out = "(and";
  for (const auto& t : tasks) out += " " + to_string(t);
  return out + ")";
}

void section(std::ostringstream& os, std::string_view keyword, const std::vector<std::string>& lines) {
  os << "  (" << keyword;
  for (const auto& l : lines) os << "\n    " << l;
  os << ")\n";
}

}  // namespace

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.head.text();
  for (const auto& t : atom.args) out += " " + t.name.text();
  return out + ")";
}

std::string to_string(const Literal& literal) {
  return literal.positive ? to_string(literal.atom) : "(not " + to_string(literal.atom) + ")";
}

std::string pretty_print(const DomainAst& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (Symbol r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < d.types.size();) {
      std::string line;
      std::size_t j = i;
      for (; j < d.types.size() && d.types[j].parent == d.types[i].parent; ++j) {
        line += d.types[j].name.text() + " ";
      }
      lines.push_back(line + "- " + d.types[i].parent.text());
      i = j;
    }
    section(os, ":types", lines);
  }
  if (!d.constants.empty()) section(os, ":constants", {typed_names(d.constants)});

  std::vector<std::string> preds;
  for (const auto& p : d.predicates) {
    std::string ps = params(p.params);
    preds.push_back("(" + p.name.text() + (ps.empty() ? "" : " " + ps) + ")");
  }
  section(os, ":predicates", preds);

  for (const auto& t : d.tasks) os << "  (:task " << t.name << " :parameters (" << params(t.params) << "))\n";

  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n"
       << "    :parameters (" << params(a.params) << ")\n"
       << "    :precondition " << conjunction(a.precondition) << "\n"
       << "    :effect " << conjunction(a.effect) << ")\n";
  }
  for (const auto& m : d.methods) {
    os << "  (:method " << m.name << "\n"
       << "    :parameters (" << params(m.params) << ")\n"
       << "    :task " << to_string(m.task) << "\n"
       << "    :precondition " << conjunction(m.precondition) << "\n"
       << "    :ordered-subtasks " << task_list(m.subtasks) << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string pretty_print(const ProblemAst& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  if (!p.requirements.empty()) {
    os << "  (:requirements";
    for (Symbol r : p.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!p.objects.empty()) section(os, ":objects", {typed_names(p.objects)});
  std::vector<std::string> init;
  for (const auto& a : p.init) init.push_back(to_string(a));
  section(os, ":init", init);
  os << "  (:goal " << conjunction(p.goal) << ")\n";
  if (p.initial_tasks) os << "  (:htn :ordered-subtasks " << task_list(*p.initial_tasks) << ")\n";
  os << ")\n";
  return os.str();
}

}  // namespace plankit::pddl
