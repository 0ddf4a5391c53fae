#pragma once

#include "ivmech/model.hpp"

#include <random>

namespace fixtures {

using namespace ivmech;

inline Rational q(const char* text) { return parse_rational(text); }

// Binding pair (1,2) -> (2,1): rho(1,2) = (1, 2/5), rho(2,1) = (1/2, 1).
inline Ratios pair_ratios() {
  ProfileSpace sp(2, 2);
  std::vector<Rational> rho(8, Rational(1));
  rho[4 + sp.index({1, 2})] = q("2/5");
  rho[sp.index({2, 1})] = q("1/2");
  return Ratios(2, 2, rho);
}

inline Instance pair_instance() { return values_from_ratios(pair_ratios(), Mode::Good); }

// v1 = 1 + 99(s2 - 1), v2 = 10.
inline Instance steep_good() {
  ProfileSpace sp(2, 2);
  std::vector<Rational> t(8);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    t[idx] = 1 + 99 * (sp.signal(idx, 1) - 1);
    t[4 + idx] = 10;
  }
  return Instance(2, 2, Mode::Good, t);
}

// c1 = 1 + 99(2 - s2), c2 = 10.
inline Instance steep_chore() {
  ProfileSpace sp(2, 2);
  std::vector<Rational> t(8);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    t[idx] = 1 + 99 * (2 - sp.signal(idx, 1));
    t[4 + idx] = 10;
  }
  return Instance(2, 2, Mode::Chore, t);
}

inline Ratios ones(int n, int k) {
  ProfileSpace sp(n, k);
  return Ratios(n, k, std::vector<Rational>(n * sp.size(), Rational(1)));
}

// Integer values in [1, range], with ties on a line when tie_prob fires.
inline Instance random_instance(std::mt19937_64& rng, int n, int k, Mode mode, double tie_prob = 0.2, int range = 20) {
  ProfileSpace sp(n, k);
  std::vector<Rational> t(n * sp.size());
  std::uniform_int_distribution<int> val(1, range);
  std::bernoulli_distribution tie(tie_prob);
  for (int i = 0; i < n; ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      for (int s = 1; s <= k; ++s) {
        std::size_t idx = sp.with_signal(base, i, s);
        if (s > 1 && tie(rng)) {
          t[i * sp.size() + idx] = t[i * sp.size() + sp.with_signal(base, i, s - 1)];
        } else {
          t[i * sp.size() + idx] = val(rng);
        }
      }
    }
  }
  return Instance(n, k, mode, t);
}

inline AllocationRule random_allocation(std::mt19937_64& rng, int n, int k) {
  ProfileSpace sp(n, k);
  std::uniform_int_distribution<int> w(0, 6);
  std::vector<Rational> x(n * sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    std::vector<int> raw(n);
    int total = 0;
    for (auto& r : raw) total += (r = w(rng));
    if (total == 0) raw[0] = total = 1;
    for (int i = 0; i < n; ++i) {
      x[i * sp.size() + idx] = Rational(raw[i], total);
      x[i * sp.size() + idx].canonicalize();
    }
  }
  return AllocationRule(n, k, x);
}

// Plain enumeration of all n^(k^n) deterministic rules; tiny instances only.
inline Rational enumerate_det(const Ratios& rho, const LineOrdering& ord) {
  const auto& sp = rho.space();
  const int n = sp.n();
  std::vector<int> w(sp.size(), 0);
  Rational best = -1;
  while (true) {
    auto x = AllocationRule::deterministic(n, sp.k(), w);
    if (is_truthful(x, ord).truthful) {
      Rational r = eval_ratio(rho, x, Objective::Value);
      if (best < 0 || r < best) best = r;
    }
    std::size_t pos = 0;
    while (pos < w.size() && ++w[pos] == n) w[pos++] = 0;
    if (pos == w.size()) break;
  }
  return best;
}

// Ratio table given per profile in index order, one row of n entries each.
inline Ratios ratio_table(int n, int k, const std::vector<std::vector<const char*>>& rows) {
  ProfileSpace sp(n, k);
  std::vector<Rational> rho(n * sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx)
    for (int i = 0; i < n; ++i) rho[i * sp.size() + idx] = q(rows[idx][i]);
  return Ratios(n, k, rho);
}

// Three agents, two signals; binding structure at gamma = 2.
inline Ratios three_agent_ratios() {
  return ratio_table(3, 2, {{"4/5", "1", "1/5"}, {"7/10", "1", "9/10"}, {"1/2", "2/5", "1"}, {"7/10", "1", "1"},
                            {"1", "9/10", "3/10"}, {"1/5", "1", "1/10"}, {"7/10", "3/5", "1"}, {"1", "3/5", "1/5"}});
}

}  // namespace fixtures
