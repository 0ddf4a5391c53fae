#include "ivmech/binary.hpp"

#include "ivmech/error.hpp"

#include <chrono>
#include <deque>

namespace ivmech {

bool MatchGraph::even(std::size_t idx) const {
  int sum = 0;
  for (int i = 0; i < space.n(); ++i) sum += space.signal(idx, i);
  return sum % 2 == 0;
}

bool acceptable(const Ratios& rho, int agent, std::size_t idx, const Rational& gamma) {
  return rho.at(agent, idx) * gamma >= 1;
}

bool constrained(const LineOrdering& ord, int agent, std::size_t idx) {
  const auto& sp = ord.space();
  std::size_t other = sp.with_signal(idx, agent, 3 - sp.signal(idx, agent));
  return ord.block(agent, idx) < ord.block(agent, other);
}

MatchGraph build_match_graph(const Ratios& rho, const LineOrdering& ord, const Rational& gamma) {
  const auto& sp = rho.space();
  if (sp.k() != 2) throw Error(ErrorCode::WrongArity, "matching path needs k = 2, got " + std::to_string(sp.k()));
  MatchGraph g;
  g.space = sp;
  g.gamma = gamma;
  g.singleton.assign(sp.size(), false);
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    for (int i = 0; i < sp.n(); ++i) {
      if (acceptable(rho, i, idx, gamma) && !constrained(ord, i, idx)) g.singleton[idx] = true;
    }
    if (!g.singleton[idx]) g.must_match.push_back(idx);
  }
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    for (int i = 0; i < sp.n(); ++i) {
      if (!constrained(ord, i, idx)) continue;
      std::size_t up = sp.with_signal(idx, i, 3 - sp.signal(idx, i));
      if (!acceptable(rho, i, idx, gamma) || !acceptable(rho, i, up, gamma)) continue;
      if (g.singleton[idx] && g.singleton[up]) continue;
      g.edges.push_back({idx, up, i});
    }
  }
  return g;
}

Matching hopcroft_karp(const MatchGraph& g) {
  const std::size_t N = g.space.size();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> incident(N);  // even vertex -> edge ids
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::size_t a = g.edges[e].lower, b = g.edges[e].upper;
    incident[g.even(a) ? a : b].push_back(e);
  }
  auto odd_end = [&](std::size_t e) { return g.even(g.edges[e].lower) ? g.edges[e].upper : g.edges[e].lower; };
  auto even_end = [&](std::size_t e) { return g.even(g.edges[e].lower) ? g.edges[e].lower : g.edges[e].upper; };

  Matching m;
  m.mate.assign(N, kUnmatched);
  std::vector<std::size_t> dist(N);
  std::vector<std::size_t> left;
  for (std::size_t v = 0; v < N; ++v)
    if (g.even(v)) left.push_back(v);

  auto bfs = [&]() {
    std::deque<std::size_t> queue;
    bool found = false;
    for (std::size_t u : left) {
      dist[u] = m.mate[u] == kUnmatched ? 0 : kInf;
      if (dist[u] == 0) queue.push_back(u);
    }
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t e : incident[u]) {
        std::size_t w = odd_end(e);
        if (m.mate[w] == kUnmatched) {
          found = true;
        } else {
          std::size_t next = even_end(m.mate[w]);
          if (dist[next] == kInf) {
            dist[next] = dist[u] + 1;
            queue.push_back(next);
          }
        }
      }
    }
    return found;
  };

  // Iterative layered DFS with per-vertex edge cursors.
  std::vector<std::size_t> cursor(N);
  auto augment = [&](std::size_t root) {
    std::vector<std::size_t> path_vertices{root};
    std::vector<std::size_t> path_edges;
    while (!path_vertices.empty()) {
      std::size_t u = path_vertices.back();
      if (cursor[u] == incident[u].size()) {
        dist[u] = kInf;
        path_vertices.pop_back();
        if (!path_edges.empty()) path_edges.pop_back();
        continue;
      }
      std::size_t e = incident[u][cursor[u]++];
      std::size_t w = odd_end(e);
      if (m.mate[w] == kUnmatched) {
        path_edges.push_back(e);
        for (std::size_t pe : path_edges) {
          m.mate[even_end(pe)] = pe;
          m.mate[odd_end(pe)] = pe;
        }
        return true;
      }
      std::size_t next = even_end(m.mate[w]);
      if (dist[next] == dist[u] + 1) {
        path_edges.push_back(e);
        path_vertices.push_back(next);
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (std::size_t u : left) {
      if (m.mate[u] == kUnmatched && augment(u)) ++m.size;
    }
  }
  return m;
}

AllocationRule rule_from_matching(const Ratios& rho, const LineOrdering& ord, const MatchGraph& g, const Matching& m) {
  const auto& sp = g.space;
  std::vector<int> winner(sp.size(), -1);
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    if (m.mate[idx] != kUnmatched) {
      winner[idx] = g.edges[m.mate[idx]].agent;
      continue;
    }
    if (!g.singleton[idx]) throw Error(ErrorCode::NotFeasible, "must-match profile " + sp.format(idx) + " is uncovered");
    for (int i = 0; i < sp.n() && winner[idx] < 0; ++i) {
      if (acceptable(rho, i, idx, g.gamma) && !constrained(ord, i, idx)) winner[idx] = i;
    }
  }
  return AllocationRule::deterministic(sp.n(), sp.k(), winner);
}

bool feasible_k2(const Ratios& rho, const LineOrdering& ord, const Rational& gamma) {
  auto g = build_match_graph(rho, ord, gamma);
  return hopcroft_karp(g).size == g.must_match.size();
}

SolveReport solve_det_k2(const Ratios& rho, const LineOrdering& ord) {
  auto start = std::chrono::steady_clock::now();
  auto candidates = det_candidates(rho);
  Rational gamma = candidates[smallest_feasible(candidates, [&](const Rational& g) { return feasible_k2(rho, ord, g); })];
  auto g = build_match_graph(rho, ord, gamma);
  auto m = hopcroft_karp(g);
  SolveReport report;
  report.target = Target::Det;
  report.path = SolvePath::Binary;
  report.allocation = rule_from_matching(rho, ord, g, m);
  report.ratio = eval_ratio(rho, report.allocation, Objective::Value);
  MatchingCertificate cert;
  cert.gamma = gamma;
  cert.must_match = g.must_match;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (m.mate[edge.lower] == e) cert.edges.emplace_back(edge.lower, edge.upper);
  }
  report.certificate = cert;
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport solve_det_k2(const Instance& inst) {
  return solve_det_k2(ratios_from_values(inst), orderings_from_instance(inst));
}

}  // namespace ivmech
