#include "fixtures.hpp"

#include "ivmech/duo.hpp"
#include "ivmech/lp.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ivmech;
using fixtures::enumerate_det;
using fixtures::q;

namespace {

// Reachability by closing the pairwise monotonicity constraints directly.
std::vector<std::vector<bool>> constraint_closure(const LineOrdering& ord) {
  const auto& sp = ord.space();
  const std::size_t N = sp.size();
  std::vector<std::vector<bool>> r(N, std::vector<bool>(N, false));
  for (std::size_t a = 0; a < N; ++a) {
    r[a][a] = true;
    for (std::size_t b = 0; b < N; ++b) {
      if (sp.signal(a, 1) == sp.signal(b, 1) && ord.block(0, a) < ord.block(0, b)) r[a][b] = true;
      if (sp.signal(a, 0) == sp.signal(b, 0) && ord.block(1, a) > ord.block(1, b)) r[a][b] = true;
    }
  }
  for (std::size_t m = 0; m < N; ++m)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        if (r[a][m] && r[m][b]) r[a][b] = true;
  return r;
}

Instance table_instance(int k, const std::vector<std::pair<int, int>>& v) {
  std::vector<Rational> t(2 * k * k);
  for (int idx = 0; idx < k * k; ++idx) {
    t[idx] = v[idx].first;
    t[k * k + idx] = v[idx].second;
  }
  return Instance(2, k, Mode::Good, t);
}

// Values listed in profile-index order: (1,1), (2,1), (3,1), (1,2), ...
Instance chain_instance() {
  return table_instance(3, {{10, 100}, {10, 4}, {10, 40}, {30, 30}, {3, 3}, {40, 40}, {6, 20}, {4, 4}, {2, 2}});
}

Instance crossing_counterexample() {
  ProfileSpace sp(2, 2);
  std::vector<Rational> t(8);
  t[sp.index({1, 1})] = q("1/2");
  t[sp.index({1, 2})] = 1;
  t[sp.index({2, 1})] = q("1/2");
  t[sp.index({2, 2})] = 1;
  t[4 + sp.index({1, 1})] = q("1/4");
  t[4 + sp.index({1, 2})] = q("1/4");
  t[4 + sp.index({2, 1})] = q("1/2");
  t[4 + sp.index({2, 2})] = 1;
  return Instance(2, 2, Mode::Good, t);
}

}  // namespace

TEST(ConflictFunction, Examples) {
  EXPECT_EQ(conflict_function(1, 1), 1);
  EXPECT_EQ(conflict_function(q("2/5"), q("1/2")), q("8/11"));
  EXPECT_EQ(conflict_function(1, q("3/7")), 1);
  EXPECT_EQ(conflict_function(q("3/7"), 1), 1);
}

TEST(ConflictFunction, InequalityChain) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> den(1, 1000);
  int checked = 0;
  for (int trial = 0; trial < 12000; ++trial) {
    long du = den(rng), dv = den(rng);
    Rational u = make_rational(std::uniform_int_distribution<long>(1, du)(rng), du);
    Rational v = make_rational(std::uniform_int_distribution<long>(1, dv)(rng), dv);
    Rational inv_u = 1 / u, inv_v = 1 / v;
    Rational lower = 1 / conflict_function(u, v);
    Rational mid = conflict_function(inv_u, inv_v);
    Rational upper = inv_u < inv_v ? inv_u : inv_v;
    ASSERT_LE(lower, mid) << u << " " << v;
    ASSERT_LE(mid, upper) << u << " " << v;
    ++checked;
  }
  EXPECT_GE(checked, 10000);
  EXPECT_EQ(1 / conflict_function(1, 1), conflict_function(1, 1));
}

TEST(BuildDg, ConstantValuesHaveNoEdges) {
  std::vector<Rational> t(18, Rational(3));
  auto dg = build_dg(Instance(2, 3, Mode::Good, t));
  EXPECT_EQ(dg.edge_count(), 0u);
  EXPECT_EQ(dg.vertex_count(), 9u);
}

TEST(BuildDg, IncreasingTwoSignals) {
  ProfileSpace sp(2, 2);
  auto dg = build_dg(fixtures::pair_instance());
  auto p = [&](int a, int b) { return sp.index({a, b}); };
  EXPECT_TRUE(precedes(dg, p(1, 2), p(1, 1)));
  EXPECT_TRUE(precedes(dg, p(1, 2), p(2, 2)));
  EXPECT_TRUE(precedes(dg, p(1, 2), p(2, 1)));
  EXPECT_TRUE(precedes(dg, p(1, 1), p(2, 1)));
  EXPECT_TRUE(precedes(dg, p(2, 2), p(2, 1)));
  EXPECT_FALSE(precedes(dg, p(2, 1), p(1, 2)));
  EXPECT_FALSE(precedes(dg, p(1, 1), p(2, 2)));
  EXPECT_FALSE(precedes(dg, p(2, 2), p(1, 1)));
}

TEST(BuildDg, TiedLineUsesOneDummy) {
  // Agent 1 line with values (3, 1, 3): blocks {2} < {1, 3}.
  ProfileSpace sp(2, 3);
  std::vector<Rational> t(18, Rational(1));
  for (std::size_t idx = 0; idx < 9; ++idx) t[idx] = sp.signal(idx, 0) == 2 ? 1 : 3;
  auto dg = build_dg(Instance(2, 3, Mode::Good, t));
  EXPECT_EQ(dg.vertex_count(), 9u + 3u);
  EXPECT_EQ(dg.edge_count(), 3u * 3u);
  for (int s2 = 1; s2 <= 3; ++s2) {
    EXPECT_TRUE(precedes(dg, sp.index({2, s2}), sp.index({1, s2})));
    EXPECT_TRUE(precedes(dg, sp.index({2, s2}), sp.index({3, s2})));
    EXPECT_FALSE(precedes(dg, sp.index({1, s2}), sp.index({3, s2})));
  }
}

TEST(BuildDg, ReachabilityMatchesConstraintClosure) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 80; ++trial) {
    int k = 2 + trial % 4;
    auto inst = fixtures::random_instance(rng, 2, k, trial % 2 ? Mode::Chore : Mode::Good, 0.3, 5);
    auto ord = orderings_from_instance(inst);
    auto dg = build_dg(ord);
    EXPECT_LE(dg.vertex_count(), 3u * k * k);
    auto closure = constraint_closure(ord);
    for (std::size_t a = 0; a < inst.space().size(); ++a) {
      auto reach = reachable_from(dg.adj, a);
      for (std::size_t b = 0; b < inst.space().size(); ++b) ASSERT_EQ(reach[b], closure[a][b]);
    }
  }
}

TEST(Condense, AcyclicGivesSingletons) {
  auto inst = fixtures::pair_instance();
  auto dag = condense(build_dg(inst), ratios_from_values(inst));
  std::set<std::size_t> comps;
  for (std::size_t idx = 0; idx < 4; ++idx) comps.insert(dag.component[idx]);
  EXPECT_EQ(comps.size(), 4u);
  for (std::size_t c = 0; c < dag.count; ++c)
    for (std::size_t d : dag.successors[c]) EXPECT_LT(c, d);
}

TEST(Condense, ChainComponents) {
  auto inst = chain_instance();
  ProfileSpace sp(2, 3);
  auto dag = condense(build_dg(inst), ratios_from_values(inst));
  std::size_t c = dag.component[sp.index({1, 2})];
  std::vector<std::size_t> expected;
  for (auto s : {Profile{1, 2}, Profile{2, 2}, Profile{3, 2}, Profile{2, 3}, Profile{3, 3}}) expected.push_back(sp.index(s));
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(dag.members[c], expected);
}

TEST(Condense, TieCycleMerges) {
  // Orders run around the square, so all four profiles lie on one cycle.
  auto inst = table_instance(2, {{1, 1}, {5, 2}, {5, 2}, {1, 1}});
  auto dag = condense(build_dg(inst), ratios_from_values(inst));
  ProfileSpace sp(2, 2);
  std::set<std::size_t> comps;
  for (std::size_t idx = 0; idx < 4; ++idx) comps.insert(dag.component[idx]);
  EXPECT_EQ(comps.size(), 1u);
  auto closure = constraint_closure(orderings_from_instance(inst));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      EXPECT_EQ(dag.component[a] == dag.component[b], closure[a][b] && closure[b][a]);
}

TEST(OptimalRatios, ConflictPairInstance) {
  auto r = optimal_ratios(fixtures::pair_instance());
  EXPECT_EQ(r.value, q("11/8"));
  EXPECT_EQ(r.cost, q("8/5"));
  EXPECT_EQ(r.det, 2);
  ProfileSpace sp(2, 2);
  ASSERT_TRUE(r.det_pair);
  EXPECT_EQ(r.det_pair->source, sp.index({1, 2}));
  EXPECT_EQ(r.det_pair->sink, sp.index({2, 1}));
  EXPECT_EQ(r.value_pair->bound, q("11/8"));
}

TEST(OptimalRatios, TrivialInstances) {
  auto ones = optimal_ratios(fixtures::ones(2, 3), orderings_from_instance(values_from_ratios(fixtures::ones(2, 3), Mode::Good)));
  EXPECT_EQ(ones.value, 1);
  EXPECT_EQ(ones.cost, 1);
  EXPECT_EQ(ones.det, 1);
  EXPECT_FALSE(ones.det_pair);
  auto steep = optimal_ratios(fixtures::steep_good());
  EXPECT_EQ(steep.value, 1);
  EXPECT_EQ(steep.det, 1);
}

TEST(OptimalRatios, RequiresTwoAgents) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(optimal_ratios(fixtures::random_instance(rng, 3, 2, Mode::Good)), Error);
}

TEST(Zap, Pair) {
  auto x = zap(fixtures::pair_instance(), 2);
  for (std::size_t idx = 0; idx < 4; ++idx) EXPECT_EQ(x.at(0, idx), 1);
  EXPECT_EQ(eval_ratio(fixtures::pair_ratios(), x, Objective::Value), 2);
  try {
    zap(fixtures::pair_instance(), q("3/2"));
    FAIL();
  } catch (const ConflictError& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolation);
    EXPECT_EQ(e.pair().bound, 2);
    EXPECT_EQ(e.pair().kind, Target::Det);
  }
}

TEST(Zap, AllOnesGivesAgentTwo) {
  auto rho = fixtures::ones(2, 3);
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  auto x = zap(rho, ord, 1);
  for (std::size_t idx = 0; idx < 9; ++idx) EXPECT_EQ(x.at(1, idx), 1);
}

TEST(Sap, ValuePair) {
  auto x = sap_v(fixtures::pair_instance(), q("11/8"));
  ProfileSpace sp(2, 2);
  EXPECT_EQ(x.at(0, sp.index({1, 2})), q("6/11"));
  EXPECT_EQ(x.at(0, sp.index({2, 1})), q("6/11"));
  EXPECT_EQ(eval_ratio(fixtures::pair_ratios(), x, Objective::Value), q("11/8"));
  EXPECT_THROW(sap_v(fixtures::pair_instance(), q("5/4")), ConflictError);
}

TEST(Sap, CostPair) {
  auto x = sap_c(fixtures::pair_instance(), q("8/5"));
  ProfileSpace sp(2, 2);
  EXPECT_EQ(x.at(0, sp.index({1, 2})), q("3/5"));
  EXPECT_EQ(x.at(0, sp.index({2, 1})), q("3/5"));
  EXPECT_EQ(eval_ratio(fixtures::pair_ratios(), x, Objective::Cost), q("8/5"));
  EXPECT_THROW(sap_c(fixtures::pair_instance(), q("3/2")), ConflictError);
}

TEST(Sap, AllOnesGivesZero) {
  auto rho = fixtures::ones(2, 2);
  auto ord = orderings_from_instance(values_from_ratios(rho, Mode::Good));
  auto xv = sap_v(rho, ord, 1);
  auto xc = sap_c(rho, ord, 1);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    EXPECT_EQ(xv.at(0, idx), 0);
    EXPECT_EQ(xc.at(0, idx), 0);
  }
}

TEST(Interval, InfiniteBranches) {
  auto rho = fixtures::ones(2, 2);
  auto iv = profile_interval(rho, 0, Target::Value, 2);
  EXPECT_EQ(iv.lo.kind, Endpoint::NegInf);
  EXPECT_EQ(iv.hi.kind, Endpoint::PosInf);
  EXPECT_TRUE(Endpoint::neg_inf() < Endpoint::finite(-1000));
  EXPECT_TRUE(Endpoint::finite(1000) < Endpoint::pos_inf());
}

TEST(TwoSat, Pair) {
  auto sat = twosat_feasible(fixtures::pair_instance(), 2);
  ASSERT_TRUE(sat.satisfiable);
  auto ord = orderings_from_instance(fixtures::pair_instance());
  EXPECT_TRUE(is_truthful(*sat.rule, ord).truthful);
  EXPECT_LE(eval_ratio(fixtures::pair_ratios(), *sat.rule, Objective::Value), 2);
  EXPECT_FALSE(twosat_feasible(fixtures::pair_instance(), q("3/2")).satisfiable);
}

TEST(TwoSat, RedChain) {
  auto inst = chain_instance();
  auto rho = ratios_from_values(inst);
  ProfileSpace sp(2, 3);
  EXPECT_EQ(rho.at(1, sp.index({2, 1})), q("2/5"));
  EXPECT_EQ(rho.at(0, sp.index({1, 3})), q("3/10"));
  auto dg = build_dg(inst);
  EXPECT_TRUE(precedes(dg, sp.index({2, 1}), sp.index({1, 3})));
  EXPECT_FALSE(twosat_feasible(inst, 2).satisfiable);
  EXPECT_FALSE(twosat_feasible(inst, q("12/5")).satisfiable);
  auto ord = orderings_from_instance(inst);
  Rational best = enumerate_det(rho, ord);
  EXPECT_GE(best, q("5/2"));
  EXPECT_EQ(optimal_ratios(inst).det, best);
  EXPECT_EQ(twosat_min_ratio(rho, ord), best);
}

TEST(SingleCrossing, ConverseFails) {
  auto inst = crossing_counterexample();
  EXPECT_FALSE(is_single_crossing(inst, 2));
  EXPECT_LE(optimal_ratios(inst).det, 2);
  auto x = zap(inst, 2);
  EXPECT_TRUE(is_truthful(x, orderings_from_instance(inst)).truthful);
}

TEST(SingleCrossing, IdenticalValues) {
  ProfileSpace sp(2, 3);
  std::vector<Rational> t(18);
  for (std::size_t idx = 0; idx < 9; ++idx) t[idx] = t[9 + idx] = sp.signal(idx, 0) + 2 * sp.signal(idx, 1);
  Instance inst(2, 3, Mode::Good, t);
  EXPECT_TRUE(is_single_crossing(inst, 1));
  EXPECT_TRUE(is_single_crossing(inst, 3));
}

TEST(SingleCrossing, RejectsNonMonotone) {
  auto inst = table_instance(2, {{5, 1}, {1, 2}, {5, 2}, {1, 1}});
  EXPECT_THROW(is_single_crossing(inst, 2), Error);
}

TEST(SingleCrossing, ImpliesDetBound) {
  std::mt19937_64 rng(17);
  int hits = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int k = 2 + trial % 3;
    ProfileSpace sp(2, k);
    std::vector<Rational> t(2 * sp.size());
    // Own signal moves a value more than the other's does.
    std::uniform_int_distribution<int> w(1, 4);
    int a1 = w(rng) + 2, b1 = w(rng), a2 = w(rng) + 2, b2 = w(rng);
    for (std::size_t idx = 0; idx < sp.size(); ++idx) {
      t[idx] = a1 * sp.signal(idx, 0) + b1 * sp.signal(idx, 1);
      t[sp.size() + idx] = b2 * sp.signal(idx, 0) + a2 * sp.signal(idx, 1) + w(rng) % 2;
    }
    Instance inst(2, k, Mode::Good, t);
    if (!is_monotone(inst)) continue;
    for (Rational alpha : {Rational(1), Rational(2), Rational(3)}) {
      if (is_single_crossing(inst, alpha)) {
        ++hits;
        EXPECT_LE(optimal_ratios(inst).det, alpha);
      }
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(Agreement, RandomTwoAgentInstances) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 120; ++trial) {
    int k = 2 + trial % 2;
    Mode mode = trial % 3 == 0 ? Mode::Chore : Mode::Good;
    auto inst = fixtures::random_instance(rng, 2, k, mode, 0.25, 12);
    auto rho = ratios_from_values(inst);
    auto ord = orderings_from_instance(inst);
    auto r = optimal_ratios(rho, ord);
    ASSERT_EQ(r.value, solve_val(rho, ord).ratio) << "trial " << trial;
    ASSERT_EQ(r.cost, solve_cst(rho, ord).ratio) << "trial " << trial;
    ASSERT_EQ(r.det, enumerate_det(rho, ord)) << "trial " << trial;
    ASSERT_EQ(r.det, twosat_min_ratio(rho, ord));
    ASSERT_EQ(r.det, solve_det_lp(rho, ord).ratio);
    for (Target t : {Target::Value, Target::Cost, Target::Det}) {
      auto report = solve_duo(rho, ord, t);
      ASSERT_TRUE(is_truthful(report.allocation, ord).truthful);
      Objective obj = t == Target::Cost ? Objective::Cost : Objective::Value;
      ASSERT_EQ(eval_ratio(rho, report.allocation, obj), report.ratio) << target_name(t) << " trial " << trial;
    }
  }
}
