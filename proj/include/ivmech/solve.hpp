#pragma once

#include "ivmech/oracle.hpp"
#include "ivmech/report.hpp"

#include <string>
#include <vector>

namespace ivmech {

enum class FastPath { Auto, Lp, Duo, Binary, Oracle };

FastPath parse_fast_path(const std::string& name);

// Profiles above which the propagation/brute-force det paths refuse (TooLarge).
inline constexpr std::size_t kDetProfileGuard = std::size_t{1} << 20;

// Auto: n = 2 duo; k = 2 det matching; otherwise LP, or propagation for det.
// Oracle: brute force for det (size-capped), LP for value/cost.
SolveReport solve(const Ratios& rho, const LineOrdering& ord, Target target, FastPath path = FastPath::Auto,
                  std::size_t budget = 1'000'000);

struct CrossCheckRow {
  Target target = Target::Value;
  std::string method;
  Rational ratio;
  bool verified = true;
  std::string note;
};

struct CrossCheck {
  std::vector<CrossCheckRow> rows;
  std::vector<std::string> skipped;
  bool agree = true;
};

// Every applicable path per target, each report run through verify_report.
CrossCheck cross_check(const Ratios& rho, const LineOrdering& ord, std::size_t budget = 1'000'000);

}  // namespace ivmech
