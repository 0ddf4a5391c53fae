#include "fixtures.hpp"

#include "ivmech/binary.hpp"
#include "ivmech/duo.hpp"
#include "ivmech/error.hpp"
#include "ivmech/lp.hpp"
#include "ivmech/oracle.hpp"

#include <gtest/gtest.h>

using namespace ivmech;
using fixtures::q;

namespace {

struct Case {
  Ratios rho;
  LineOrdering ord;
};

Case random_case(std::mt19937_64& rng, int n, int k) {
  auto inst = fixtures::random_instance(rng, n, k, rng() % 3 == 0 ? Mode::Chore : Mode::Good, 0.25, 12);
  return {ratios_from_values(inst), orderings_from_instance(inst)};
}

Case pair_case() {
  auto inst = fixtures::pair_instance();
  return {ratios_from_values(inst), orderings_from_instance(inst)};
}

}  // namespace

TEST(BruteForce, Pair) {
  auto c = pair_case();
  auto r = brute_force_det(c.rho, c.ord);
  EXPECT_EQ(r.ratio, 2);
  EXPECT_TRUE(is_truthful(r.rule, c.ord).truthful);
  EXPECT_EQ(eval_ratio(c.rho, r.rule, Objective::Value), 2);
}

TEST(BruteForce, AllOnes) {
  for (auto [n, k] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{4, 2}}) {
    auto rho = fixtures::ones(n, k);
    auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
    BruteForceOptions opt;
    opt.allow_backtracking = true;
    EXPECT_EQ(brute_force_det(rho, ord, opt).ratio, 1);
  }
}

TEST(BruteForce, ThreeAgentMatchesMatching) {
  auto rho = fixtures::three_agent_ratios();
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  EXPECT_EQ(brute_force_det(rho, ord).ratio, solve_det_k2(rho, ord).ratio);
}

TEST(BruteForce, SizeCap) {
  auto rho = fixtures::ones(3, 3);
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  EXPECT_THROW(brute_force_det(rho, ord), Error);
  BruteForceOptions opt;
  opt.allow_backtracking = true;
  EXPECT_EQ(brute_force_det(rho, ord, opt).ratio, 1);
}

TEST(BruteForce, ParallelMatchesSerialAndEnumeration) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 2;
    int k = n == 2 ? 2 + trial % 3 : 2;
    auto c = random_case(rng, n, k);
    auto serial = brute_force_det_serial(c.rho, c.ord);
    auto parallel = brute_force_det(c.rho, c.ord);
    ASSERT_EQ(serial.ratio, parallel.ratio);
    ASSERT_EQ(serial.rule.winners(), parallel.rule.winners());
    if (k <= 3) ASSERT_EQ(serial.ratio, fixtures::enumerate_det(c.rho, c.ord));
  }
}

TEST(Propagation, Examples) {
  auto c = pair_case();
  EXPECT_EQ(propagate_feasible(c.rho, c.ord, q("3/2")).status, PropagationStatus::Infeasible);
  auto ok = propagate_feasible(c.rho, c.ord, 2);
  ASSERT_EQ(ok.status, PropagationStatus::Feasible);
  EXPECT_TRUE(is_truthful(*ok.rule, c.ord).truthful);
  auto rho = fixtures::ones(3, 3);
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  EXPECT_EQ(propagate_feasible(rho, ord, 1).status, PropagationStatus::Feasible);
}

TEST(Propagation, BudgetGivesTimeout) {
  // Every agent acceptable, no forcing at all beyond monotonicity: needs decisions.
  auto rho = fixtures::ones(3, 3);
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  EXPECT_EQ(propagate_feasible(rho, ord, 1, 0).status, PropagationStatus::Timeout);
}

TEST(Propagation, Pins) {
  auto c = pair_case();
  ProfileSpace sp(2, 2);
  // Agent 1 pinned at (1,1) is forced at (2,1) too.
  auto r = propagate_feasible(c.rho, c.ord, 2, 1000, {{0, sp.index({1, 1}), true}});
  ASSERT_EQ(r.status, PropagationStatus::Feasible);
  EXPECT_EQ(r.rule->at(0, sp.index({1, 1})), 1);
  EXPECT_EQ(r.rule->at(0, sp.index({2, 1})), 1);
}

TEST(Propagation, AgreesWithBruteForce) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 2 + trial % 3;
    int k = n == 2 ? 3 + trial % 2 : (n == 3 ? 2 + trial % 2 : 2);
    auto c = random_case(rng, n, k);
    BruteForceOptions opt;
    opt.allow_backtracking = true;
    Rational best = brute_force_det(c.rho, c.ord, opt).ratio;
    for (const auto& g : det_candidates(c.rho)) {
      auto r = propagate_feasible(c.rho, c.ord, g);
      ASSERT_NE(r.status, PropagationStatus::Timeout);
      ASSERT_EQ(r.status == PropagationStatus::Feasible, g >= best) << "trial " << trial;
      if (r.rule) {
        ASSERT_TRUE(is_truthful(*r.rule, c.ord).truthful);
        ASSERT_LE(eval_ratio(c.rho, *r.rule, Objective::Value), g);
      }
    }
    ASSERT_EQ(solve_det_propagation(c.rho, c.ord).ratio, best);
  }
}

TEST(Sandwich, DetAboveCostAboveValue) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 2;
    auto c = random_case(rng, n, n == 2 ? 3 : 2);
    Rational det = brute_force_det(c.rho, c.ord).ratio;
    Rational cost = solve_cst(c.rho, c.ord).ratio;
    Rational value = solve_val(c.rho, c.ord).ratio;
    ASSERT_GE(det, cost);
    ASSERT_GE(cost, value);
    ASSERT_GE(value, 1);
  }
}

TEST(VerifyReport, FastPathsPass) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = random_case(rng, 2, 2);
    std::vector<SolveReport> reports{solve_duo(c.rho, c.ord, Target::Value), solve_duo(c.rho, c.ord, Target::Cost),
                                     solve_duo(c.rho, c.ord, Target::Det),   solve_det_k2(c.rho, c.ord),
                                     solve_val(c.rho, c.ord),                solve_cst(c.rho, c.ord),
                                     solve_det_lp(c.rho, c.ord),             solve_det_oracle(c.rho, c.ord),
                                     solve_det_propagation(c.rho, c.ord)};
    for (const auto& r : reports) {
      auto v = verify_report(c.rho, c.ord, r);
      ASSERT_TRUE(v.ok) << path_name(r.path) << " " << target_name(r.target) << ": " << v.detail;
    }
  }
}

TEST(VerifyReport, TamperedRatio) {
  auto c = pair_case();
  auto r = solve_duo(c.rho, c.ord, Target::Det);
  r.ratio = q("3/2");
  auto v = verify_report(c.rho, c.ord, r);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.reason, Mismatch::RatioMismatch);
}

TEST(VerifyReport, NonMonotoneWitness) {
  auto c = pair_case();
  ProfileSpace sp(2, 2);
  auto r = solve_duo(c.rho, c.ord, Target::Det);
  // Agent 1 at (1,2) only: violates x1 increasing toward (1,1).
  std::vector<int> w(4, 1);
  w[sp.index({1, 2})] = 0;
  r.allocation = AllocationRule::deterministic(2, 2, w);
  auto v = verify_report(c.rho, c.ord, r);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.reason, Mismatch::NotTruthful);
  EXPECT_NE(v.detail.find("agent"), std::string::npos);
}

TEST(VerifyReport, BadCertificate) {
  auto c = pair_case();
  auto r = solve_duo(c.rho, c.ord, Target::Value);
  std::get<ConflictPair>(r.certificate).bound = 2;
  EXPECT_EQ(verify_report(c.rho, c.ord, r).reason, Mismatch::CertificateInvalid);
  auto lp = solve_val(c.rho, c.ord);
  std::get<LpCertificate>(lp.certificate).point[0] += 1;
  EXPECT_EQ(verify_report(c.rho, c.ord, lp).reason, Mismatch::CertificateInvalid);
}
