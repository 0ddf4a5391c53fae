#include "ivmech/solve.hpp"

#include "ivmech/binary.hpp"
#include "ivmech/duo.hpp"
#include "ivmech/error.hpp"
#include "ivmech/lp.hpp"

#include <functional>

namespace ivmech {

FastPath parse_fast_path(const std::string& name) {
  if (name == "auto") return FastPath::Auto;
  if (name == "lp") return FastPath::Lp;
  if (name == "duo") return FastPath::Duo;
  if (name == "binary") return FastPath::Binary;
  if (name == "oracle") return FastPath::Oracle;
  throw Error(ErrorCode::ParseError, "unknown fast path " + name);
}

namespace {

void guard_det_size(const ProfileSpace& sp) {
  if (sp.size() > kDetProfileGuard) {
    throw Error(ErrorCode::TooLarge, std::to_string(sp.size()) + " profiles exceed the det search guard");
  }
}

SolveReport randomized_lp(const Ratios& rho, const LineOrdering& ord, Target target) {
  return target == Target::Value ? solve_val(rho, ord) : solve_cst(rho, ord);
}

}  // namespace

SolveReport solve(const Ratios& rho, const LineOrdering& ord, Target target, FastPath path, std::size_t budget) {
  const auto& sp = rho.space();
  switch (path) {
    case FastPath::Duo:
      return solve_duo(rho, ord, target);
    case FastPath::Binary:
      if (target != Target::Det) throw Error(ErrorCode::PreconditionViolation, "the matching path solves det only");
      return solve_det_k2(rho, ord);
    case FastPath::Lp:
      return target == Target::Det ? solve_det_lp(rho, ord) : randomized_lp(rho, ord, target);
    case FastPath::Oracle:
      if (target != Target::Det) return randomized_lp(rho, ord, target);
      return solve_det_oracle(rho, ord);
    case FastPath::Auto:
      break;
  }
  if (sp.n() == 2) return solve_duo(rho, ord, target);
  if (target != Target::Det) return randomized_lp(rho, ord, target);
  if (sp.k() == 2) return solve_det_k2(rho, ord);
  guard_det_size(sp);
  return solve_det_propagation(rho, ord, budget);
}

CrossCheck cross_check(const Ratios& rho, const LineOrdering& ord, std::size_t budget) {
  const auto& sp = rho.space();
  const bool two_agents = sp.n() == 2;
  const bool two_signals = sp.k() == 2;
  CrossCheck out;
  auto run = [&](Target target, const std::string& method, const std::function<SolveReport()>& f) {
    try {
      SolveReport r = f();
      auto v = verify_report(rho, ord, r);
      out.rows.push_back({target, method, r.ratio, v.ok, v.ok ? "" : v.detail});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooLarge) throw;
      out.skipped.push_back(std::string(target_name(target)) + "/" + method + ": " + e.what());
    }
  };
  for (Target t : {Target::Value, Target::Cost}) {
    run(t, "lp", [&] { return randomized_lp(rho, ord, t); });
    if (two_agents) run(t, "duo", [&] { return solve_duo(rho, ord, t); });
  }
  if (two_agents) {
    run(Target::Det, "duo", [&] { return solve_duo(rho, ord, Target::Det); });
    out.rows.push_back({Target::Det, "twosat", twosat_min_ratio(rho, ord), true, "ratio only"});
  }
  if (two_signals) run(Target::Det, "binary", [&] { return solve_det_k2(rho, ord); });
  if (two_agents || two_signals) run(Target::Det, "det_lp", [&] { return solve_det_lp(rho, ord); });
  run(Target::Det, "propagation", [&] {
    guard_det_size(sp);
    return solve_det_propagation(rho, ord, budget);
  });
  run(Target::Det, "oracle", [&] { return solve_det_oracle(rho, ord); });

  for (const auto& row : out.rows) {
    if (!row.verified) out.agree = false;
    for (const auto& other : out.rows)
      if (other.target == row.target && other.ratio != row.ratio) out.agree = false;
  }
  return out;
}

}  // namespace ivmech
