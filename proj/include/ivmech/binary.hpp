#pragma once

#include "ivmech/model.hpp"
#include "ivmech/report.hpp"

#include <limits>

namespace ivmech {

struct MatchEdge {
  std::size_t lower = 0;  // profile with the sigma-smaller own signal
  std::size_t upper = 0;
  int agent = 0;
};

// Two-signal selection problem as bipartite matching; vertices are profiles.
struct MatchGraph {
  ProfileSpace space;
  Rational gamma;
  std::vector<bool> singleton;  // E': some acceptable agent has no successor
  std::vector<MatchEdge> edges; // E''': constrained pairs, at least one end must-match
  std::vector<std::size_t> must_match;

  // Parity class of a profile (sum of signals).
  bool even(std::size_t idx) const;
};

// Agents acceptable at gamma: rho_i(s) >= 1/gamma.
bool acceptable(const Ratios& rho, int agent, std::size_t idx, const Rational& gamma);
// Agent whose own signal has a strict successor on its line.
bool constrained(const LineOrdering& ord, int agent, std::size_t idx);

MatchGraph build_match_graph(const Ratios& rho, const LineOrdering& ord, const Rational& gamma);

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

// Maximum matching; mate[v] is the edge index covering v or kUnmatched.
struct Matching {
  std::size_t size = 0;
  std::vector<std::size_t> mate;
};

Matching hopcroft_karp(const MatchGraph& g);

// Deterministic rule from a matching covering every must-match vertex.
AllocationRule rule_from_matching(const Ratios& rho, const LineOrdering& ord, const MatchGraph& g, const Matching& m);

bool feasible_k2(const Ratios& rho, const LineOrdering& ord, const Rational& gamma);

SolveReport solve_det_k2(const Ratios& rho, const LineOrdering& ord);
SolveReport solve_det_k2(const Instance& inst);

}  // namespace ivmech
