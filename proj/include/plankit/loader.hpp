#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plankit/grounder.hpp"
#include "plankit/htn.hpp"
#include "plankit/pddl/linker.hpp"

namespace plankit {

/// Unreadable file or error diagnostics. `messages` are formatted with the
/// file they refer to.
struct LoadError : PlanningError {
  LoadError(const std::string& what, std::vector<std::string> messages)
      : PlanningError(what), messages(std::move(messages)) {}
  std::vector<std::string> messages;
};

std::string read_file(const std::filesystem::path& path);

struct Loaded {
  pddl::LinkedProblem linked;
  std::vector<std::string> warnings;
};

/// Parses and links a domain/problem pair. Throws LoadError.
Loaded load_linked(const std::filesystem::path& domain, const std::filesystem::path& problem, bool allow_htn = false);

/// load_linked followed by build_problem. Grounding errors propagate.
ClassicalProblem load_classical(const std::filesystem::path& domain, const std::filesystem::path& problem,
                                const GroundingOptions& options = {});

htn::HtnProblem load_htn(const std::filesystem::path& domain, const std::filesystem::path& problem);

}  // namespace plankit
