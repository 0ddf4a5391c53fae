#pragma once

#include "ivmech/model.hpp"
#include "ivmech/report.hpp"

#include <optional>
#include <string>

namespace ivmech {

struct BruteForceOptions {
  // Refuse when n^(k^n) exceeds the cap, unless backtracking is accepted.
  double size_cap = 1e7;
  bool allow_backtracking = false;
};

struct BruteForceResult {
  Rational ratio;
  AllocationRule rule;
  std::size_t nodes = 0;
};

// Exhaustive search with monotonicity pruning and branch and bound.
// Returns the lexicographically first optimal winner vector.
BruteForceResult brute_force_det_serial(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt = {});
// Same search split into prefix shards run under OpenMP; identical result.
BruteForceResult brute_force_det(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt = {});

enum class PropagationStatus { Feasible, Infeasible, Timeout };
const char* propagation_status_name(PropagationStatus s);

struct Pin {
  int agent = 0;
  std::size_t profile = 0;
  bool selected = true;
};

struct PropagationResult {
  PropagationStatus status = PropagationStatus::Infeasible;
  std::optional<AllocationRule> rule;
  std::size_t nodes = 0;
};

PropagationResult propagate_feasible(const Ratios& rho, const LineOrdering& ord, const Rational& gamma,
                                     std::size_t budget = 1'000'000, const std::vector<Pin>& pins = {});

// Smallest candidate gamma accepted by propagation; throws TooLarge on timeout.
SolveReport solve_det_propagation(const Ratios& rho, const LineOrdering& ord, std::size_t budget = 1'000'000);
SolveReport solve_det_oracle(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt = {});

enum class Mismatch { None, WrongShape, NotTruthful, RatioMismatch, CertificateInvalid };
const char* mismatch_name(Mismatch m);

struct VerifyResult {
  bool ok = true;
  Mismatch reason = Mismatch::None;
  std::string detail;
};

VerifyResult verify_report(const Ratios& rho, const LineOrdering& ord, const SolveReport& report);

}  // namespace ivmech
