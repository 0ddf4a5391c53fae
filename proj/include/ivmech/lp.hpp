#pragma once

#include "ivmech/model.hpp"
#include "ivmech/report.hpp"
#include "ivmech/simplex.hpp"

#include <optional>

namespace ivmech {

// Variable x_i(s) sits at column i * k^n + idx.
inline std::size_t allocation_var(const ProfileSpace& sp, int agent, std::size_t idx) {
  return static_cast<std::size_t>(agent) * sp.size() + idx;
}

// T(sigma): per-profile simplex rows plus one chain row per adjacent block pair.
RationalLP truthful_polytope(const LineOrdering& ord);

// Val: maximize beta subject to beta <= <x(s), rho(s)>; beta is the last column.
RationalLP val_lp(const Ratios& rho, const LineOrdering& ord);
// Cst: minimize alpha subject to alpha >= <x(s), 1/rho(s)>; alpha is the last column.
RationalLP cst_lp(const Ratios& rho, const LineOrdering& ord);

SolveReport solve_val(const Ratios& rho, const LineOrdering& ord);
SolveReport solve_cst(const Ratios& rho, const LineOrdering& ord);

struct DetLpResult {
  bool feasible = false;
  bool integral = false;
  std::optional<AllocationRule> rule;
  LPSolution solution;
};

// Requires n = 2 or k = 2.
DetLpResult solve_det_integral(const Ratios& rho, const LineOrdering& ord, const Rational& gamma);
// Binary search of solve_det_integral over det_candidates.
SolveReport solve_det_lp(const Ratios& rho, const LineOrdering& ord);

// Reads the allocation block of an LP point.
AllocationRule allocation_from_point(const ProfileSpace& sp, const std::vector<Rational>& point);

}  // namespace ivmech
