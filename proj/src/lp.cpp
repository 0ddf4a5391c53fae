#include "ivmech/lp.hpp"

#include "ivmech/error.hpp"

#include <chrono>

namespace ivmech {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void name_allocation_vars(RationalLP& lp, const ProfileSpace& sp) {
  lp.names.resize(lp.num_vars);
  for (int i = 0; i < sp.n(); ++i) {
    for (std::size_t idx = 0; idx < sp.size(); ++idx) {
      std::string name = "x" + std::to_string(i + 1) + "_";
      for (int t = 0; t < sp.n(); ++t) name += (t ? "_" : "") + std::to_string(sp.signal(idx, t));
      lp.names[allocation_var(sp, i, idx)] = name;
    }
  }
}

}  // namespace

RationalLP truthful_polytope(const LineOrdering& ord) {
  const auto& sp = ord.space();
  RationalLP lp;
  lp.num_vars = static_cast<std::size_t>(sp.n()) * sp.size();
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    SparseRow row;
    for (int i = 0; i < sp.n(); ++i) row.emplace_back(allocation_var(sp, i, idx), Rational(1));
    lp.add(std::move(row), Relation::Equal, 1);
  }
  for (int i = 0; i < sp.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      auto blocks = ord.blocks(i, base);
      for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
        for (int lo : blocks[b]) {
          for (int hi : blocks[b + 1]) {
            std::size_t plo = sp.with_signal(base, i, lo);
            std::size_t phi = sp.with_signal(base, i, hi);
            lp.add({{allocation_var(sp, i, plo), Rational(1)}, {allocation_var(sp, i, phi), Rational(-1)}},
                   Relation::LessEq, 0);
          }
        }
      }
    }
  }
  name_allocation_vars(lp, sp);
  return lp;
}

RationalLP val_lp(const Ratios& rho, const LineOrdering& ord) {
  const auto& sp = rho.space();
  RationalLP lp = truthful_polytope(ord);
  const std::size_t beta = lp.num_vars++;
  lp.names.push_back("beta");
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    SparseRow row{{beta, Rational(1)}};
    for (int i = 0; i < sp.n(); ++i) row.emplace_back(allocation_var(sp, i, idx), Rational(-rho.at(i, idx)));
    lp.add(std::move(row), Relation::LessEq, 0);
  }
  lp.sense = Sense::Maximize;
  lp.objective = {{beta, Rational(1)}};
  return lp;
}

RationalLP cst_lp(const Ratios& rho, const LineOrdering& ord) {
  const auto& sp = rho.space();
  RationalLP lp = truthful_polytope(ord);
  const std::size_t alpha = lp.num_vars++;
  lp.names.push_back("alpha");
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    SparseRow row;
    for (int i = 0; i < sp.n(); ++i) row.emplace_back(allocation_var(sp, i, idx), Rational(1 / rho.at(i, idx)));
    row.emplace_back(alpha, Rational(-1));
    lp.add(std::move(row), Relation::LessEq, 0);
  }
  lp.sense = Sense::Minimize;
  lp.objective = {{alpha, Rational(1)}};
  return lp;
}

AllocationRule allocation_from_point(const ProfileSpace& sp, const std::vector<Rational>& point) {
  std::vector<Rational> x(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(sp.n() * sp.size()));
  return AllocationRule(sp.n(), sp.k(), std::move(x));
}

namespace {

SolveReport solve_randomized(const Ratios& rho, const RationalLP& lp, Target target) {
  auto start = std::chrono::steady_clock::now();
  LPSolution sol = simplex_solve(lp);
  if (sol.status != LPStatus::Optimal) {
    throw Error(ErrorCode::NotFeasible, std::string("ratio LP ended ") + lp_status_name(sol.status));
  }
  SolveReport report;
  report.target = target;
  report.path = SolvePath::Lp;
  report.ratio = target == Target::Value ? Rational(1 / sol.value) : sol.value;
  report.allocation = allocation_from_point(rho.space(), sol.point);
  report.certificate = LpCertificate{sol.point, sol.basis, sol.value};
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace

SolveReport solve_val(const Ratios& rho, const LineOrdering& ord) {
  return solve_randomized(rho, val_lp(rho, ord), Target::Value);
}

SolveReport solve_cst(const Ratios& rho, const LineOrdering& ord) {
  return solve_randomized(rho, cst_lp(rho, ord), Target::Cost);
}

DetLpResult solve_det_integral(const Ratios& rho, const LineOrdering& ord, const Rational& gamma) {
  const auto& sp = rho.space();
  if (sp.n() >= 3 && sp.k() >= 3) {
    throw Error(ErrorCode::IntegralityNotGuaranteed, "integral LP path needs n = 2 or k = 2");
  }
  RationalLP lp = truthful_polytope(ord);
  const Rational threshold = 1 / gamma;
  for (int i = 0; i < sp.n(); ++i) {
    for (std::size_t idx = 0; idx < sp.size(); ++idx) {
      if (rho.at(i, idx) >= threshold) lp.objective.emplace_back(allocation_var(sp, i, idx), Rational(1));
    }
  }
  lp.sense = Sense::Maximize;
  DetLpResult out;
  out.solution = simplex_solve(lp);
  out.feasible = out.solution.value == static_cast<long>(sp.size());
  out.integral = true;
  for (const auto& v : out.solution.point) out.integral = out.integral && (v == 0 || v == 1);
  if (out.feasible) out.rule = allocation_from_point(sp, out.solution.point);
  return out;
}

SolveReport solve_det_lp(const Ratios& rho, const LineOrdering& ord) {
  auto start = std::chrono::steady_clock::now();
  auto candidates = det_candidates(rho);
  std::size_t pos = smallest_feasible(candidates, [&](const Rational& g) { return solve_det_integral(rho, ord, g).feasible; });
  DetLpResult best = solve_det_integral(rho, ord, candidates[pos]);
  if (!best.integral) throw Error(ErrorCode::IntegralityNotGuaranteed, "LP vertex is fractional");
  SolveReport report;
  report.target = Target::Det;
  report.path = SolvePath::Lp;
  report.allocation = *best.rule;
  report.ratio = eval_ratio(rho, report.allocation, Objective::Value);
  report.certificate = LpCertificate{best.solution.point, best.solution.basis, best.solution.value};
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace ivmech
