#include "plankit/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "plankit/csp.hpp"
#include "plankit/grounder.hpp"
#include "plankit/htn.hpp"
#include "plankit/loader.hpp"
#include "plankit/oracle.hpp"
#include "plankit/pddl/parser.hpp"
#include "plankit/pddl/printer.hpp"
#include "plankit/search.hpp"
#include "plankit/validator.hpp"

namespace plankit::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

struct Options {
  std::vector<std::string> files;
  std::string domain, problem, plan_file;
  std::string manifest, check, output;
  std::string engine = "forward";
  std::string strategy = "dfs";
  std::string csp_method = "backtracking";
  std::string format = "text";
  std::size_t bound = 0;
  std::size_t max_bound = 20;
  std::size_t node_budget = 1'000'000;
  std::size_t depth_budget = 0;
  std::uint64_t seed = 0;
  std::uint64_t instance_budget = GroundingOptions{}.instance_budget;
  bool trace = false;
  bool no_static_pruning = false;
  bool no_cycle_check = false;
  bool no_forward_checking = false;
  bool dump = false;
  bool print = false;
  bool bound_given = false;
  bool depth_given = false;
};

/// Thrown for problems reported through the normal error path.
struct Failure {
  int code;
  std::vector<std::string> messages;
};

json header(const std::string& command, const std::vector<std::string>& args) {
  json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  j["arguments"] = args;
  return j;
}

double seconds(std::chrono::nanoseconds d) { return std::chrono::duration<double>(d).count(); }

std::string outcome_name(const SearchOutcome& o) {
  if (std::holds_alternative<Plan>(o)) return "plan";
  if (std::holds_alternative<Unsolvable>(o)) return "unsolvable";
  return "budget-exhausted";
}

int outcome_code(const SearchOutcome& o) {
  if (std::holds_alternative<Plan>(o)) return kSuccess;
  if (std::holds_alternative<Unsolvable>(o)) return kFailure;
  return kBudgetExhausted;
}

json plan_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& a : plan) steps.push_back(to_string(a));
  return steps;
}

GroundingOptions grounding(const Options& o) {
  return {.instance_budget = o.instance_budget, .prune_statics = !o.no_static_pruning};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kUsageError, {"cannot write " + path}};
  f << text;
}

// ---------------------------------------------------------------- parse

int cmd_parse(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  json j = header("parse", args);
  j["files"] = json::array();
  bool ok = true;
  std::optional<pddl::DomainAst> domain;
  std::optional<pddl::ProblemAst> problem;
  std::string problem_path;
  pddl::ParseOptions popts{.allow_htn = true};
  for (const auto& path : o.files) {
    json f;
    f["path"] = path;
    std::string text = read_file(path);
    std::vector<Diagnostic> diags;
    std::optional<std::string> printed;
    switch (pddl::detect_kind(text)) {
      case pddl::FileKind::domain: {
        f["kind"] = "domain";
        auto r = pddl::parse_domain(text, popts);
        diags = r.diagnostics;
        if (r) {
          f["name"] = r->name.text();
          printed = pddl::pretty_print(*r);
          domain = std::move(*r.value);
        }
        break;
      }
      case pddl::FileKind::problem: {
        f["kind"] = "problem";
        auto r = pddl::parse_problem(text, popts);
        diags = r.diagnostics;
        if (r) {
          f["name"] = r->name.text();
          printed = pddl::pretty_print(*r);
          problem = std::move(*r.value);
          problem_path = path;
        }
        break;
      }
      case pddl::FileKind::unknown: {
        f["kind"] = "unknown";
        // Parse as a domain anyway to get located diagnostics.
        auto r = pddl::parse_domain(text, popts);
        diags = r.diagnostics;
        if (!has_errors(diags)) {
          diags.push_back({Severity::error, DiagnosticCode::syntax_error,
                           "expected (define (domain ...)) or (define (problem ...))", SourceMap(text).span(0, 0), {}});
        }
        break;
      }
    }
    json d = json::array();
    for (const auto& diag : diags) d.push_back(format_diagnostic(diag, path));
    bool file_ok = printed.has_value() && !has_errors(diags);
    f["ok"] = file_ok;
    f["diagnostics"] = d;
    if (o.print && printed) f["printed"] = *printed;
    ok = ok && file_ok;
    j["files"].push_back(f);
  }
  if (ok && domain && problem) {
    auto linked = pddl::link(*domain, *problem);
    json d = json::array();
    for (const auto& diag : linked.diagnostics) d.push_back(format_diagnostic(diag, problem_path));
    j["link"] = {{"ok", linked.ok()}, {"diagnostics", d}};
    ok = linked.ok();
  }
  j["ok"] = ok;

  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& f : j["files"]) {
      out << f["path"].get<std::string>() << ": " << f["kind"].get<std::string>();
      if (f.contains("name")) out << " " << f["name"].get<std::string>();
      out << (f["ok"].get<bool>() ? " ok" : " failed") << "\n";
      for (const auto& d : f["diagnostics"]) out << "  " << d.get<std::string>() << "\n";
      if (f.contains("printed")) out << f["printed"].get<std::string>();
    }
    if (j.contains("link")) {
      out << "link: " << (j["link"]["ok"].get<bool>() ? "ok" : "failed") << "\n";
      for (const auto& d : j["link"]["diagnostics"]) out << "  " << d.get<std::string>() << "\n";
    }
  }
  return ok ? kSuccess : kUsageError;
}

// ---------------------------------------------------------------- ground

int cmd_ground(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  auto loaded = load_linked(o.domain, o.problem);
  const auto& linked = loaded.linked;
  ClassicalProblem p = build_problem(linked, grounding(o));
  json j = header("ground", args);
  j["domain"] = linked.domain->name.text();
  j["problem"] = linked.problem->name.text();
  j["static_pruning"] = !o.no_static_pruning;
  j["fluents"] = p.fluents().size();
  j["actions"] = p.actions().size();
  json schemas = json::array();
  for (const auto& s : linked.domain->actions) {
    std::size_t kept = std::count_if(p.actions().begin(), p.actions().end(), [&](const auto& a) { return a.name() == s.name; });
    schemas.push_back({{"name", s.name.text()}, {"candidates", count_groundings(s, linked)}, {"instances", kept}});
  }
  j["schemas"] = schemas;
  if (o.dump) {
    json f = json::array(), a = json::array();
    for (const auto& x : p.fluents()) f.push_back(to_string(x));
    for (const auto& x : p.actions()) a.push_back(to_string(x));
    j["fluent_list"] = f;
    j["action_list"] = a;
  }
  j["warnings"] = loaded.warnings;

  if (o.format == "json") {
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  for (const auto& w : loaded.warnings) out << w << "\n";
  out << "domain: " << j["domain"].get<std::string>() << "\n";
  out << "problem: " << j["problem"].get<std::string>() << "\n";
  out << "static pruning: " << (o.no_static_pruning ? "off" : "on") << "\n";
  out << "fluents: " << p.fluents().size() << "\n";
  out << "actions: " << p.actions().size() << "\n";
  for (const auto& s : j["schemas"]) {
    out << "  " << s["name"].get<std::string>() << ": " << s["instances"].get<std::size_t>() << " of "
        << s["candidates"].get<std::uint64_t>() << "\n";
  }
  if (o.dump) {
    out << "fluent list:\n";
    for (const auto& x : j["fluent_list"]) out << "  " << x.get<std::string>() << "\n";
    out << "action list:\n";
    for (const auto& x : j["action_list"]) out << "  " << x.get<std::string>() << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------- plan

void render_plan_text(const json& j, std::ostream& out) {
  for (const auto& w : j["warnings"]) out << w.get<std::string>() << "\n";
  out << "domain: " << j["domain"].get<std::string>() << "\n";
  out << "problem: " << j["problem"].get<std::string>() << "\n";
  out << "engine: " << j["engine"].get<std::string>();
  if (j.contains("strategy")) out << " (" << j["strategy"].get<std::string>() << ")";
  if (j.contains("method")) out << " (" << j["method"].get<std::string>() << ")";
  out << "\n";
  if (j.contains("bound")) out << "bound: " << j["bound"].get<std::size_t>() << "\n";
  out << "outcome: " << j["outcome"].get<std::string>() << "\n";
  if (j.contains("plan")) {
    out << "plan length: " << j["plan_length"].get<std::size_t>() << "\n";
    std::size_t i = 0;
    for (const auto& s : j["plan"]) out << "  " << i++ << ": " << s.get<std::string>() << "\n";
    out << "valid: " << (j["valid"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (j.contains("trace")) {
    out << "decomposition:\n";
    for (const auto& l : j["trace"]) out << "  " << l.get<std::string>() << "\n";
  }
  const auto& s = j["statistics"];
  out << "expanded: " << s["expanded"].get<std::size_t>() << "\n";
  out << "generated: " << s["generated"].get<std::size_t>() << "\n";
  out << "max frontier: " << s["max_frontier"].get<std::size_t>() << "\n";
  out << "wall time: " << std::fixed << std::setprecision(6) << j["wall_time_seconds"].get<double>() << " s\n";
}

int cmd_plan(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  json j = header("plan", args);
  SearchResult result{Unsolvable{}, {}};
  std::optional<bool> valid;
  std::vector<std::string> warnings;

  if (o.engine == "htn") {
    auto loaded = load_linked(o.domain, o.problem, true);
    warnings = loaded.warnings;
    j["domain"] = loaded.linked.domain->name.text();
    j["problem"] = loaded.linked.problem->name.text();
    auto made = htn::make_htn_problem(std::move(loaded.linked));
    if (!made) {
      std::vector<std::string> msgs;
      for (const auto& d : made.diagnostics) msgs.push_back(format_diagnostic(d, o.problem));
      throw Failure{kUsageError, msgs};
    }
    const auto& hp = *made;
    j["engine"] = "htn";
    htn::HtnConfig config{.node_budget = o.node_budget, .depth_budget = std::nullopt};
    if (o.depth_given) config.depth_budget = o.depth_budget;
    auto r = htn::seek_plan(hp, config);
    result = r.result;
    if (result.solved()) {
      valid = validate_htn_solution(hp, result.plan()).valid() && trace_matches(hp, r.trace, result.plan());
      if (o.trace) {
        json lines = json::array();
        std::istringstream in(r.trace.render());
        for (std::string line; std::getline(in, line);) lines.push_back(line);
        j["trace"] = lines;
      }
    }
  } else {
    auto loaded = load_linked(o.domain, o.problem);
    warnings = loaded.warnings;
    j["domain"] = loaded.linked.domain->name.text();
    j["problem"] = loaded.linked.problem->name.text();
    ClassicalProblem p = build_problem(loaded.linked, grounding(o));
    j["engine"] = o.engine;
    if (o.engine == "forward" || o.engine == "backward") {
      SearchConfig c;
      c.strategy = o.strategy == "bfs" ? Strategy::bfs : Strategy::dfs;
      c.node_budget = o.node_budget;
      c.cycle_checking = !o.no_cycle_check;
      if (o.depth_given) c.max_depth = o.depth_budget;
      j["strategy"] = o.strategy;
      result = o.engine == "forward" ? forward_search(p, c) : backward_search(p, c);
    } else {
      csp::BoundedOptions c;
      c.method = o.csp_method == "min-conflicts" ? csp::Method::min_conflicts : csp::Method::backtracking;
      c.forward_checking = !o.no_forward_checking;
      c.node_budget = o.node_budget;
      c.max_steps = o.node_budget;
      c.seed = o.seed;
      j["method"] = o.csp_method;
      if (o.bound_given) {
        // Exactly this horizon, no deepening.
        auto start = std::chrono::steady_clock::now();
        auto inst = csp::encode(p, o.bound);
        j["bound"] = o.bound;
        if (c.method == csp::Method::backtracking) {
          auto r = csp::solve_backtracking(inst, c.forward_checking, c.node_budget);
          result.stats.expanded = r.stats.nodes;
          if (r.satisfiable()) result.outcome = csp::decode_plan(inst, r.assignment(), p);
          else if (!r.unsat()) result.outcome = BudgetExhausted{};
        } else {
          auto r = csp::min_conflicts(inst, c.max_steps, c.seed);
          result.stats.expanded = r.steps;
          if (r.solved()) result.outcome = csp::decode_plan(inst, std::get<csp::Assignment>(r.outcome), p);
          else result.outcome = BudgetExhausted{};
        }
        result.stats.generated = inst.variables.size();
        result.stats.duration = std::chrono::steady_clock::now() - start;
      } else {
        j["bound"] = o.max_bound;
        result = csp::plan_bounded(p, o.max_bound, c);
      }
    }
    if (result.solved()) valid = validate_plan(p, result.plan()).valid();
  }

  j["outcome"] = outcome_name(result.outcome);
  if (result.solved()) {
    j["plan"] = plan_json(result.plan());
    j["plan_length"] = result.plan().size();
    j["valid"] = *valid;
  }
  j["statistics"] = {{"expanded", result.stats.expanded},
                     {"generated", result.stats.generated},
                     {"max_frontier", result.stats.max_frontier}};
  j["warnings"] = warnings;
  j["wall_time_seconds"] = seconds(result.stats.duration);

  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    render_plan_text(j, out);
  }
  if (valid && !*valid) return kFailure;
  return outcome_code(result.outcome);
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  auto loaded = load_linked(o.domain, o.problem, true);
  auto parsed = parse_plan(read_file(o.plan_file));
  if (!parsed) {
    std::vector<std::string> msgs;
    for (const auto& d : parsed.diagnostics) msgs.push_back(format_diagnostic(d, o.plan_file));
    throw Failure{kUsageError, msgs};
  }
  const auto& steps = *parsed;
  json j = header("validate", args);
  j["domain"] = loaded.linked.domain->name.text();
  j["problem"] = loaded.linked.problem->name.text();
  Verdict v;
  bool htn_mode = loaded.linked.problem->initial_tasks.has_value();
  if (htn_mode) {
    auto made = htn::make_htn_problem(std::move(loaded.linked));
    if (!made) {
      std::vector<std::string> msgs;
      for (const auto& d : made.diagnostics) msgs.push_back(format_diagnostic(d, o.problem));
      throw Failure{kUsageError, msgs};
    }
    v = validate_htn_solution(*made, steps, o.trace);
  } else {
    // No pruning: a plan may name an action that pruning would drop.
    ClassicalProblem p = build_problem(loaded.linked, {.instance_budget = o.instance_budget, .prune_statics = false});
    v = validate_plan(p, steps, o.trace);
  }
  j["mode"] = htn_mode ? "htn" : "classical";
  j["steps"] = steps.size();
  j["valid"] = v.valid();
  j["verdict"] = v.describe(steps);
  if (o.trace) {
    json states = json::array();
    for (const auto& s : v.state_trace) states.push_back(to_string(s));
    j["state_trace"] = states;
  }
  j["warnings"] = loaded.warnings;

  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& w : loaded.warnings) out << w << "\n";
    out << "mode: " << j["mode"].get<std::string>() << "\n";
    out << "steps: " << steps.size() << "\n";
    out << "verdict: " << j["verdict"].get<std::string>() << "\n";
    if (o.trace) {
      std::size_t i = 0;
      for (const auto& s : j["state_trace"]) out << "  s" << i++ << " = " << s.get<std::string>() << "\n";
    }
  }
  return v.valid() ? kSuccess : kFailure;
}

// ---------------------------------------------------------------- csp export

int cmd_csp_export(const Options& o, std::ostream& out) {
  ClassicalProblem p = build_problem(load_linked(o.domain, o.problem).linked, grounding(o));
  std::string listing = csp::export_listing(csp::encode(p, o.bound));
  if (o.output.empty()) {
    out << listing;
  } else {
    write_text(o.output, listing);
  }
  return kSuccess;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Options& o, std::ostream& out) {
  std::string report = oracle::expected_report(oracle::load_manifest(o.manifest));
  if (!o.output.empty()) write_text(o.output, report);
  if (!o.check.empty()) {
    std::string cached = read_file(o.check);
    if (cached != report) {
      out << "mismatch between " << o.check << " and regenerated oracle results:\n" << report;
      return kFailure;
    }
    out << o.check << " is up to date\n";
    return kSuccess;
  }
  if (o.output.empty()) out << report;
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Classical and HTN planning toolkit", "plankit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "plankit 0.1.0");

  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  };
  auto grounding_opts = [&](CLI::App* sub) {
    sub->add_flag("--no-static-pruning", o.no_static_pruning, "Keep actions whose static preconditions fail in I");
    sub->add_option("--instance-budget", o.instance_budget, "Maximum number of ground atoms and actions")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* parse = app.add_subcommand("parse", "Syntax and type check PDDL files");
  parse->add_option("files", o.files, "Domain and/or problem files")->required()->check(CLI::ExistingFile);
  parse->add_flag("--print", o.print, "Print the parsed files back");
  format_opt(parse);

  auto* ground = app.add_subcommand("ground", "Report the size of the grounded problem");
  ground->add_option("domain", o.domain)->required()->check(CLI::ExistingFile);
  ground->add_option("problem", o.problem)->required()->check(CLI::ExistingFile);
  ground->add_flag("--count", "Only counts (the default)");
  ground->add_flag("--dump", o.dump, "List every fluent and ground action");
  grounding_opts(ground);
  format_opt(ground);

  auto* plan = app.add_subcommand("plan", "Solve a problem");
  plan->add_option("domain", o.domain)->required()->check(CLI::ExistingFile);
  plan->add_option("problem", o.problem)->required()->check(CLI::ExistingFile);
  plan->add_option("--engine", o.engine)->check(CLI::IsMember({"forward", "backward", "csp", "htn"}))->capture_default_str();
  plan->add_option("--strategy", o.strategy)->check(CLI::IsMember({"dfs", "bfs"}))->capture_default_str();
  auto* bound = plan->add_option("--bound", o.bound, "csp: solve exactly this horizon");
  plan->add_option("--max-bound", o.max_bound, "csp: deepen up to this horizon")->capture_default_str();
  plan->add_option("--csp-method", o.csp_method)
      ->check(CLI::IsMember({"backtracking", "min-conflicts"}))
      ->capture_default_str();
  plan->add_flag("--no-forward-checking", o.no_forward_checking, "csp: plain backtracking");
  plan->add_option("--node-budget", o.node_budget, "Nodes (or min-conflicts steps) per search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* depth = plan->add_option("--depth-budget", o.depth_budget,
                                 "htn: method applications per path; forward/backward: plan length");
  plan->add_option("--seed", o.seed, "Seed for min-conflicts")->capture_default_str();
  plan->add_flag("--trace", o.trace, "htn: print the decomposition tree");
  plan->add_flag("--no-cycle-check", o.no_cycle_check, "forward/backward: allow revisiting states");
  grounding_opts(plan);
  format_opt(plan);

  auto* validate = app.add_subcommand("validate", "Check a plan file against a problem");
  validate->add_option("domain", o.domain)->required()->check(CLI::ExistingFile);
  validate->add_option("problem", o.problem)->required()->check(CLI::ExistingFile);
  validate->add_option("plan", o.plan_file)->required()->check(CLI::ExistingFile);
  validate->add_flag("--trace", o.trace, "Print the visited states");
  validate->add_option("--instance-budget", o.instance_budget)->check(CLI::PositiveNumber)->capture_default_str();
  format_opt(validate);

  auto* csp_cmd = app.add_subcommand("csp", "Constraint encoding tools");
  csp_cmd->require_subcommand(1);
  auto* csp_export = csp_cmd->add_subcommand("export", "Write the CSP encoding as a text listing");
  csp_export->add_option("domain", o.domain)->required()->check(CLI::ExistingFile);
  csp_export->add_option("problem", o.problem)->required()->check(CLI::ExistingFile);
  csp_export->add_option("--bound", o.bound, "Horizon k")->required();
  csp_export->add_option("-o,--output", o.output, "Write to a file instead of stdout");
  grounding_opts(csp_export);

  auto* oracle_cmd = app.add_subcommand("oracle", "Recompute expected fixture results by brute force");
  oracle_cmd->add_option("manifest", o.manifest)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--check", o.check, "Compare against a cached results file")->check(CLI::ExistingFile);
  oracle_cmd->add_option("-o,--output", o.output, "Write the results to a file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }
  o.bound_given = bound->count() > 0;
  o.depth_given = depth->count() > 0;

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*parse) return cmd_parse(o, args, out);
    if (*ground) return cmd_ground(o, args, out);
    if (*plan) {
      if (o.engine != "csp" && (o.bound_given || o.csp_method != "backtracking")) {
        err << "plankit: --bound and --csp-method apply to --engine csp only\n";
        return kUsageError;
      }
      return cmd_plan(o, args, out);
    }
    if (*validate) return cmd_validate(o, args, out);
    if (*csp_export) return cmd_csp_export(o, out);
    if (*oracle_cmd) return cmd_oracle(o, out);
    return kUsageError;
  } catch (const Failure& f) {
    for (const auto& m : f.messages) err << m << "\n";
    return f.code;
  } catch (const LoadError& e) {
    for (const auto& m : e.messages) err << m << "\n";
    if (e.messages.empty()) err << "plankit: " << e.what() << "\n";
    return kUsageError;
  } catch (const GroundingBudgetExceeded& e) {
    err << "plankit " << command << ": " << e.what() << "\n";
    return kBudgetExhausted;
  } catch (const std::exception& e) {
    err << "plankit " << command << ": " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace plankit::cli
