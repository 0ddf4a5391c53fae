#pragma once

#include "ivmech/error.hpp"
#include "ivmech/graph.hpp"
#include "ivmech/model.hpp"
#include "ivmech/report.hpp"

#include <optional>

namespace ivmech {

// Monotonicity graph of a two-agent instance. Vertices 0..k^2-1 are profiles,
// the rest are dummies standing for one block boundary on one line.
// An edge u -> v means x1(u) <= x1(v) is required.
struct DuoGraph {
  ProfileSpace space;
  std::size_t profiles = 0;
  Adjacency adj;

  std::size_t vertex_count() const { return adj.size(); }
  std::size_t edge_count() const;
};

DuoGraph build_dg(const LineOrdering& ord);
DuoGraph build_dg(const Instance& inst);

struct CondensedDag {
  std::size_t count = 0;
  std::vector<std::size_t> component;                // per DuoGraph vertex
  std::vector<std::vector<std::size_t>> members;     // profiles only, ascending
  std::vector<std::vector<std::size_t>> successors;  // deduplicated, all targets larger
  std::vector<std::vector<std::size_t>> predecessors;
  std::vector<Rational> rho1;                        // component minima, 1 when no profile
  std::vector<Rational> rho2;
};

CondensedDag condense(const DuoGraph& dg, const Ratios& rho);

// s precedes t in the reachability relation of the graph.
bool precedes(const DuoGraph& dg, std::size_t s, std::size_t t);

Rational conflict_function(const Rational& u, const Rational& v);

struct DuoRatios {
  Rational value = 1;
  Rational cost = 1;
  Rational det = 1;
  std::optional<ConflictPair> value_pair;
  std::optional<ConflictPair> cost_pair;
  std::optional<ConflictPair> det_pair;

  const Rational& of(Target t) const;
  const std::optional<ConflictPair>& pair(Target t) const;
};

DuoRatios optimal_ratios(const Ratios& rho, const LineOrdering& ord);
DuoRatios optimal_ratios(const Instance& inst);

// Raised when an algorithm is run above the optimum; carries the binding pair.
class ConflictError : public Error {
 public:
  ConflictError(ConflictPair pair, const std::string& what)
      : Error(ErrorCode::PreconditionViolation, what), pair_(std::move(pair)) {}
  const ConflictPair& pair() const { return pair_; }

 private:
  ConflictPair pair_;
};

// Extended rational for interval endpoints.
struct Endpoint {
  enum Kind { NegInf, Finite, PosInf } kind = Finite;
  Rational q;

  static Endpoint neg_inf() { return {NegInf, 0}; }
  static Endpoint pos_inf() { return {PosInf, 0}; }
  static Endpoint finite(Rational v) { return {Finite, std::move(v)}; }
  bool operator<(const Endpoint& o) const;
  bool operator==(const Endpoint& o) const { return kind == o.kind && (kind != Finite || q == o.q); }
};

struct Interval {
  Endpoint lo;
  Endpoint hi;
};

// Allowed x1 at one profile for the value or cost objective at level alpha.
Interval profile_interval(const Ratios& rho, std::size_t idx, Target kind, const Rational& alpha);

AllocationRule zap(const Ratios& rho, const LineOrdering& ord, const Rational& alpha);
AllocationRule sap_v(const Ratios& rho, const LineOrdering& ord, const Rational& alpha);
AllocationRule sap_c(const Ratios& rho, const LineOrdering& ord, const Rational& alpha);
AllocationRule zap(const Instance& inst, const Rational& alpha);
AllocationRule sap_v(const Instance& inst, const Rational& alpha);
AllocationRule sap_c(const Instance& inst, const Rational& alpha);

struct TwoSatResult {
  bool satisfiable = false;
  std::optional<AllocationRule> rule;
};

TwoSatResult twosat_feasible(const Ratios& rho, const LineOrdering& ord, const Rational& alpha);
TwoSatResult twosat_feasible(const Instance& inst, const Rational& alpha);
// Binary search of the 2-SAT test over det_candidates.
Rational twosat_min_ratio(const Ratios& rho, const LineOrdering& ord);

bool is_single_crossing(const Instance& inst, const Rational& alpha);

SolveReport solve_duo(const Ratios& rho, const LineOrdering& ord, Target target);

}  // namespace ivmech
