#pragma once

// Shared helpers for the unit and acceptance tests: fixture paths, a
// bitmask state-space oracle that shares no code with the library's
// engines or its own oracle, and random problem/domain generators.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plankit/core.hpp"
#include "plankit/grounder.hpp"
#include "plankit/loader.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(FIXTURE_DIR) / name; }

inline plankit::ClassicalProblem load(const std::string& domain, const std::string& problem,
                                      plankit::GroundingOptions opts = {}) {
  return plankit::load_classical(fixture(domain), fixture(problem), opts);
}

// Problem compiled to bitmasks over at most 16 fluents.
struct BitProblem {
  struct Op {
    std::uint32_t pre_pos = 0, pre_neg = 0, add = 0, del = 0;
  };
  std::size_t n = 0;
  std::vector<Op> ops;
  std::uint32_t init = 0;
  std::uint32_t goal_pos = 0, goal_neg = 0;

  bool applicable(std::uint32_t s, const Op& o) const { return (s & o.pre_pos) == o.pre_pos && (s & o.pre_neg) == 0; }
  std::uint32_t apply(std::uint32_t s, const Op& o) const { return (s | o.add) & ~o.del; }
  bool goal(std::uint32_t s) const { return (s & goal_pos) == goal_pos && (s & goal_neg) == 0; }

  // Shortest plan length by BFS over reachable masks.
  std::optional<std::size_t> optimal() const {
    std::vector<int> dist(std::size_t{1} << n, -1);
    std::deque<std::uint32_t> q{init};
    dist[init] = 0;
    while (!q.empty()) {
      auto s = q.front();
      q.pop_front();
      if (goal(s)) return static_cast<std::size_t>(dist[s]);
      for (const auto& o : ops) {
        if (!applicable(s, o)) continue;
        auto t = apply(s, o);
        if (dist[t] < 0) {
          dist[t] = dist[s] + 1;
          q.push_back(t);
        }
      }
    }
    return std::nullopt;
  }

  // Is there a plan of exactly k steps? Layered reachable sets.
  bool plan_of_length(std::size_t k) const {
    std::vector<char> cur(std::size_t{1} << n, 0);
    cur[init] = 1;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<char> next(cur.size(), 0);
      for (std::uint32_t s = 0; s < cur.size(); ++s) {
        if (!cur[s]) continue;
        for (const auto& o : ops) {
          if (applicable(s, o)) next[apply(s, o)] = 1;
        }
      }
      cur.swap(next);
    }
    for (std::uint32_t s = 0; s < cur.size(); ++s) {
      if (cur[s] && goal(s)) return true;
    }
    return false;
  }

  std::vector<std::uint32_t> reachable() const {
    std::vector<char> seen(std::size_t{1} << n, 0);
    std::vector<std::uint32_t> out{init}, stack{init};
    seen[init] = 1;
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      for (const auto& o : ops) {
        if (!applicable(s, o)) continue;
        auto t = apply(s, o);
        if (!seen[t]) {
          seen[t] = 1;
          out.push_back(t);
          stack.push_back(t);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline BitProblem compile(const plankit::ClassicalProblem& p) {
  BitProblem b;
  b.n = p.fluents().size();
  auto mask = [&](const plankit::AtomSet& set) {
    std::uint32_t m = 0;
    for (const auto& a : set) {
      for (std::size_t i = 0; i < p.fluents().size(); ++i) {
        if (p.fluents()[i] == a) m |= 1u << i;
      }
    }
    return m;
  };
  for (const auto& a : p.actions()) b.ops.push_back({mask(a.pre_pos()), mask(a.pre_neg()), mask(a.add()), mask(a.del())});
  b.init = mask(p.init().atoms());
  b.goal_pos = mask(p.goal().positive());
  b.goal_neg = mask(p.goal().negative());
  return b;
}

inline plankit::State state_of(std::uint32_t mask, const std::vector<plankit::GroundAtom>& fluents) {
  std::vector<plankit::GroundAtom> atoms;
  for (std::size_t i = 0; i < fluents.size(); ++i) {
    if (mask & (1u << i)) atoms.push_back(fluents[i]);
  }
  return plankit::State(plankit::AtomSet(std::move(atoms)));
}

inline std::vector<plankit::GroundAtom> numbered_fluents(std::size_t n) {
  std::vector<plankit::GroundAtom> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(plankit::make_atom("p" + std::to_string(i)));
  return f;
}

inline plankit::AtomSet atoms_of(std::uint32_t mask, const std::vector<plankit::GroundAtom>& fluents) {
  return state_of(mask, fluents).atoms();
}

// Random well-formed ground problem: each fluent lands in at most one of
// pre_pos/pre_neg and at most one of add/del.
inline plankit::ClassicalProblem random_problem(std::mt19937_64& rng, std::size_t max_fluents = 6,
                                                std::size_t max_actions = 12) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
  std::size_t n = pick(1, max_fluents);
  std::size_t m = pick(0, max_actions);
  auto fluents = numbered_fluents(n);
  std::vector<plankit::GroundAction> actions;
  for (std::size_t a = 0; a < m; ++a) {
    std::uint32_t pp = 0, pn = 0, ad = 0, de = 0;
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng() % 5) {
        case 0: pp |= 1u << i; break;
        case 1: pn |= 1u << i; break;
        default: break;
      }
      switch (rng() % 4) {
        case 0: ad |= 1u << i; break;
        case 1: de |= 1u << i; break;
        default: break;
      }
    }
    actions.emplace_back(plankit::Symbol("a" + std::to_string(a)), std::vector<plankit::Symbol>{},
                         plankit::GroundAction::Parts{atoms_of(pp, fluents), atoms_of(pn, fluents),
                                                      atoms_of(ad, fluents), atoms_of(de, fluents)});
  }
  std::uint32_t init = static_cast<std::uint32_t>(rng() % (1u << n));
  std::uint32_t gp = 0, gn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: gp |= 1u << i; break;
      case 1: gn |= 1u << i; break;
      default: break;
    }
  }
  return plankit::ClassicalProblem(fluents, std::move(actions), state_of(init, fluents),
                                   plankit::Goal(atoms_of(gp, fluents), atoms_of(gn, fluents)));
}

// Random typed domain text within the supported subset.
inline std::string random_domain_text(std::mt19937_64& rng, std::size_t index) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
  std::string out = "(define (domain gen" + std::to_string(index) + ")\n  (:requirements :strips";
  bool typed = rng() % 2 == 0;
  if (typed) out += " :typing";
  out += " :negative-preconditions)\n";

  std::vector<std::string> types{"object"};
  if (typed) {
    out += "  (:types";
    std::size_t nt = pick(1, 4);
    for (std::size_t t = 0; t < nt; ++t) {
      std::string name = "t" + std::to_string(t);
      out += " " + name + " - " + types[rng() % types.size()];
      types.push_back(name);
    }
    out += ")\n";
  }
  if (rng() % 3 == 0) {
    out += "  (:constants c0";
    if (typed) out += " - " + types[rng() % types.size()];
    out += ")\n";
  }

  struct Pred {
    std::string name;
    std::vector<std::string> types;
  };
  std::vector<Pred> preds;
  out += "  (:predicates";
  std::size_t np = pick(0, 4);
  for (std::size_t p = 0; p < np; ++p) {
    Pred pr{"q" + std::to_string(p), {}};
    out += " (" + pr.name;
    std::size_t ar = pick(0, 3);
    for (std::size_t j = 0; j < ar; ++j) {
      pr.types.push_back(typed ? types[rng() % types.size()] : "object");
      out += " ?x" + std::to_string(j);
      if (typed) out += " - " + pr.types.back();
    }
    out += ")";
    preds.push_back(pr);
  }
  out += ")\n";

  std::size_t na = preds.empty() ? 0 : pick(0, 3);
  for (std::size_t a = 0; a < na; ++a) {
    // One parameter per predicate argument slot keeps every literal type-correct.
    const Pred& p = preds[rng() % preds.size()];
    out += "  (:action act" + std::to_string(a) + "\n    :parameters (";
    for (std::size_t j = 0; j < p.types.size(); ++j) {
      if (j) out += " ";
      out += "?v" + std::to_string(j);
      if (typed) out += " - " + p.types[j];
    }
    out += ")\n";
    std::string atom = "(" + p.name;
    for (std::size_t j = 0; j < p.types.size(); ++j) atom += " ?v" + std::to_string(j);
    atom += ")";
    bool positive_pre = rng() % 2 == 0;
    out += "    :precondition ";
    out += positive_pre ? atom : "(not " + atom + ")";
    out += "\n    :effect ";
    out += positive_pre ? "(not " + atom + ")" : atom;
    out += ")\n";
  }
  out += ")\n";
  return out;
}

}  // namespace testing_support

namespace testing_support {

inline std::string read_text(const std::string& name) { return plankit::read_file(fixture(name)); }

}  // namespace testing_support
