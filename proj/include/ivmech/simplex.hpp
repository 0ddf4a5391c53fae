#pragma once

#include "ivmech/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ivmech {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* lp_status_name(LPStatus status);

// Sparse row; column indices are unique within a row.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

struct LinearConstraint {
  SparseRow coeffs;
  Relation relation = Relation::LessEq;
  Rational rhs;
};

// All variables are implicitly bounded below by zero.
struct RationalLP {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> constraints;
  Sense sense = Sense::Maximize;
  SparseRow objective;
  std::vector<std::string> names;  // optional, used by the text dump

  void add(SparseRow coeffs, Relation relation, Rational rhs);
  Rational evaluate(const SparseRow& row, const std::vector<Rational>& point) const;
  // Throws Error(NotFeasible) naming the first violated constraint.
  void check_feasible(const std::vector<Rational>& point) const;
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;
  // Sorted basic column indices of the final tableau (structural columns first,
  // then one slack or surplus column per inequality row in row order).
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

// Two-phase dense-tableau simplex with Bland's rule.
LPSolution simplex_solve(const RationalLP& lp);

// True iff the constraints active at point have full column rank.
bool verify_vertex(const RationalLP& lp, const std::vector<Rational>& point);

// LP-format text with exact p/q coefficients.
std::string lp_to_text(const RationalLP& lp);

}  // namespace ivmech
