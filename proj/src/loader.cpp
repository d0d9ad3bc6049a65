#include "plankit/loader.hpp"

#include <fstream>
#include <sstream>

#include "plankit/pddl/parser.hpp"

namespace plankit {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path.string(), {path.string() + ": cannot open file"});
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

namespace {

/// Moves formatted diagnostics into `errors` or `warnings`.
void sort_out(const std::vector<Diagnostic>& diags, const std::string& file, std::vector<std::string>& errors,
              std::vector<std::string>& warnings) {
  for (const auto& d : diags) (d.severity == Severity::error ? errors : warnings).push_back(format_diagnostic(d, file));
}

}  // namespace

Loaded load_linked(const std::filesystem::path& domain, const std::filesystem::path& problem, bool allow_htn) {
  pddl::ParseOptions options{.allow_htn = allow_htn};
  std::string dtext = read_file(domain);
  std::string ptext = read_file(problem);
  auto d = pddl::parse_domain(dtext, options);
  auto p = pddl::parse_problem(ptext, options);
  std::vector<std::string> errors, warnings;
  sort_out(d.diagnostics, domain.string(), errors, warnings);
  sort_out(p.diagnostics, problem.string(), errors, warnings);
  if (!d || !p) throw LoadError("cannot parse input", std::move(errors));
  auto linked = pddl::link(*d, *p);
  sort_out(linked.diagnostics, problem.string(), errors, warnings);
  if (!linked) throw LoadError("cannot link " + problem.string() + " against " + domain.string(), std::move(errors));
  return {std::move(*linked), std::move(warnings)};
}

ClassicalProblem load_classical(const std::filesystem::path& domain, const std::filesystem::path& problem,
                                const GroundingOptions& options) {
  return build_problem(load_linked(domain, problem).linked, options);
}

htn::HtnProblem load_htn(const std::filesystem::path& domain, const std::filesystem::path& problem) {
  auto loaded = load_linked(domain, problem, true);
  auto htn = htn::make_htn_problem(std::move(loaded.linked));
  if (!htn) {
    std::vector<std::string> errors, warnings;
    sort_out(htn.diagnostics, problem.string(), errors, warnings);
    throw LoadError("invalid task network in " + problem.string(), std::move(errors));
  }
  return std::move(*htn.value);
}

}  // namespace plankit
