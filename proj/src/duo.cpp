#include "ivmech/duo.hpp"

#include <algorithm>
#include <chrono>

namespace ivmech {

namespace {

void require_two_agents(const ProfileSpace& sp) {
  if (sp.n() != 2) throw Error(ErrorCode::WrongArity, "two-agent path needs n = 2, got " + std::to_string(sp.n()));
}

Rational min_of(const Rational& a, const Rational& b) { return a < b ? a : b; }

const Rational& pick(const Rational& value, const Rational& cost, const Rational& det, Target t) {
  return t == Target::Value ? value : t == Target::Cost ? cost : det;
}

}  // namespace

std::size_t DuoGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& out : adj) e += out.size();
  return e;
}

DuoGraph build_dg(const LineOrdering& ord) {
  const auto& sp = ord.space();
  require_two_agents(sp);
  DuoGraph dg;
  dg.space = sp;
  dg.profiles = sp.size();
  dg.adj.resize(sp.size());
  for (int agent = 0; agent < 2; ++agent) {
    for (std::size_t base : sp.line_bases(agent)) {
      auto blocks = ord.blocks(agent, base);
      for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
        std::size_t dummy = dg.adj.size();
        dg.adj.emplace_back();
        // Agent 2 monotone in s2 means x1 decreasing along its line.
        const auto& from = agent == 0 ? blocks[b] : blocks[b + 1];
        const auto& to = agent == 0 ? blocks[b + 1] : blocks[b];
        for (int s : from) dg.adj[sp.with_signal(base, agent, s)].push_back(dummy);
        for (int s : to) dg.adj[dummy].push_back(sp.with_signal(base, agent, s));
      }
    }
  }
  return dg;
}

DuoGraph build_dg(const Instance& inst) { return build_dg(orderings_from_instance(inst)); }

bool precedes(const DuoGraph& dg, std::size_t s, std::size_t t) { return reachable_from(dg.adj, s)[t]; }

CondensedDag condense(const DuoGraph& dg, const Ratios& rho) {
  auto scc = strongly_connected_components(dg.adj);
  CondensedDag dag;
  dag.count = scc.count;
  dag.component = scc.component;
  dag.members.resize(scc.count);
  dag.successors.resize(scc.count);
  dag.predecessors.resize(scc.count);
  dag.rho1.assign(scc.count, Rational(1));
  dag.rho2.assign(scc.count, Rational(1));
  for (std::size_t v = 0; v < dg.profiles; ++v) {
    std::size_t c = scc.component[v];
    dag.members[c].push_back(v);
    if (rho.at(0, v) < dag.rho1[c]) dag.rho1[c] = rho.at(0, v);
    if (rho.at(1, v) < dag.rho2[c]) dag.rho2[c] = rho.at(1, v);
  }
  for (std::size_t v = 0; v < dg.adj.size(); ++v) {
    for (std::size_t w : dg.adj[v]) {
      std::size_t a = scc.component[v];
      std::size_t b = scc.component[w];
      if (a != b) dag.successors[a].push_back(b);
    }
  }
  for (std::size_t c = 0; c < scc.count; ++c) {
    auto& out = dag.successors[c];
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (std::size_t d : out) dag.predecessors[d].push_back(c);
  }
  return dag;
}

Rational conflict_function(const Rational& u, const Rational& v) {
  if (u == 1 && v == 1) return 1;
  Rational out = (u * v - 1) / (u + v - 2);
  out.canonicalize();
  return out;
}

const Rational& DuoRatios::of(Target t) const { return pick(value, cost, det, t); }

const std::optional<ConflictPair>& DuoRatios::pair(Target t) const {
  return t == Target::Value ? value_pair : t == Target::Cost ? cost_pair : det_pair;
}

DuoRatios optimal_ratios(const Ratios& rho, const LineOrdering& ord) {
  auto dg = build_dg(ord);
  auto dag = condense(dg, rho);
  // Smallest rho2 among profiles reaching each component, with its profile.
  std::vector<Rational> dp(dag.count);
  std::vector<std::size_t> arg(dag.count, 0);
  std::vector<bool> has(dag.count, false);
  DuoRatios out;
  auto consider = [](Rational bound, std::size_t source, std::size_t sink, Target kind, Rational& best,
                     std::optional<ConflictPair>& pair) {
    if (bound > best) {
      best = bound;
      pair = ConflictPair{source, sink, kind, std::move(bound)};
    }
  };
  for (std::size_t c = 0; c < dag.count; ++c) {
    for (std::size_t v : dag.members[c]) {
      if (!has[c] || rho.at(1, v) < dp[c]) {
        dp[c] = rho.at(1, v);
        arg[c] = v;
        has[c] = true;
      }
    }
    for (std::size_t p : dag.predecessors[c]) {
      if (has[p] && (!has[c] || dp[p] < dp[c])) {
        dp[c] = dp[p];
        arg[c] = arg[p];
        has[c] = true;
      }
    }
    if (!has[c] || dag.members[c].empty()) continue;
    std::size_t sink = dag.members[c].front();
    for (std::size_t v : dag.members[c]) {
      if (rho.at(0, v) < rho.at(0, sink)) sink = v;
    }
    const Rational& u = dp[c];
    const Rational& w = rho.at(0, sink);
    Rational value = 1 / conflict_function(u, w);
    value.canonicalize();
    consider(value, arg[c], sink, Target::Value, out.value, out.value_pair);
    consider(conflict_function(1 / u, 1 / w), arg[c], sink, Target::Cost, out.cost, out.cost_pair);
    consider(min_of(1 / u, 1 / w), arg[c], sink, Target::Det, out.det, out.det_pair);
  }
  return out;
}

DuoRatios optimal_ratios(const Instance& inst) {
  return optimal_ratios(ratios_from_values(inst), orderings_from_instance(inst));
}

bool Endpoint::operator<(const Endpoint& o) const {
  if (kind != o.kind) return kind < o.kind;
  return kind == Finite && q < o.q;
}

Interval profile_interval(const Ratios& rho, std::size_t idx, Target kind, const Rational& alpha) {
  const Rational& r1 = rho.at(0, idx);
  const Rational& r2 = rho.at(1, idx);
  Interval iv{Endpoint::neg_inf(), Endpoint::pos_inf()};
  if (kind == Target::Value) {
    // x r1 + (1 - x) r2 >= 1/alpha
    if (r2 < 1) iv.lo = Endpoint::finite((1 / alpha - r2) / (1 - r2));
    if (r1 < 1) iv.hi = Endpoint::finite((1 - 1 / alpha) / (1 - r1));
  } else if (kind == Target::Cost) {
    // x / r1 + (1 - x) / r2 <= alpha
    if (r2 < 1) iv.lo = Endpoint::finite((1 / r2 - alpha) / (1 / r2 - 1));
    if (r1 < 1) iv.hi = Endpoint::finite((alpha - 1) / (1 / r1 - 1));
  } else {
    throw Error(ErrorCode::PreconditionViolation, "intervals exist only for value and cost");
  }
  iv.lo.q.canonicalize();
  iv.hi.q.canonicalize();
  return iv;
}

namespace {

void check_precondition(const DuoRatios& best, Target kind, const Rational& alpha) {
  if (best.of(kind) <= alpha) return;
  const auto& pair = *best.pair(kind);
  throw ConflictError(pair, std::string(target_name(kind)) + " conflict pair with bound " + to_string(pair.bound) +
                                " > " + to_string(alpha));
}

AllocationRule from_x1(const ProfileSpace& sp, const std::vector<Rational>& x1) {
  std::vector<Rational> x(2 * sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    x[idx] = x1[idx];
    x[sp.size() + idx] = 1 - x1[idx];
  }
  return AllocationRule(2, sp.k(), std::move(x));
}

AllocationRule small_as_possible(const Ratios& rho, const LineOrdering& ord, const Rational& alpha, Target kind) {
  check_precondition(optimal_ratios(rho, ord), kind, alpha);
  const auto& sp = rho.space();
  auto dg = build_dg(ord);
  auto dag = condense(dg, rho);
  std::vector<Rational> xc(dag.count, Rational(0));
  for (std::size_t c = 0; c < dag.count; ++c) {
    Endpoint lo = Endpoint::finite(0);
    Endpoint hi = Endpoint::finite(1);
    for (std::size_t p : dag.predecessors[c]) lo = std::max(lo, Endpoint::finite(xc[p]));
    for (std::size_t v : dag.members[c]) {
      auto iv = profile_interval(rho, v, kind, alpha);
      lo = std::max(lo, iv.lo);
      hi = std::min(hi, iv.hi);
    }
    if (hi < lo) throw Error(ErrorCode::PreconditionViolation, "empty interval at " + sp.format(dag.members[c].front()));
    xc[c] = lo.q;
  }
  std::vector<Rational> x1(sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) x1[idx] = xc[dag.component[idx]];
  return from_x1(sp, x1);
}

}  // namespace

AllocationRule zap(const Ratios& rho, const LineOrdering& ord, const Rational& alpha) {
  check_precondition(optimal_ratios(rho, ord), Target::Det, alpha);
  const auto& sp = rho.space();
  auto dg = build_dg(ord);
  auto dag = condense(dg, rho);
  const Rational limit = 1 / alpha;
  std::vector<bool> one(dag.count, false);
  for (std::size_t c = 0; c < dag.count; ++c) {
    bool forced = dag.rho2[c] < limit;
    for (std::size_t p : dag.predecessors[c]) forced = forced || one[p];
    if (forced && dag.rho1[c] < limit) {
      throw Error(ErrorCode::PreconditionViolation, "both agents excluded at " + sp.format(dag.members[c].front()));
    }
    one[c] = forced;
  }
  std::vector<int> winner(sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) winner[idx] = one[dag.component[idx]] ? 0 : 1;
  return AllocationRule::deterministic(2, sp.k(), winner);
}

AllocationRule sap_v(const Ratios& rho, const LineOrdering& ord, const Rational& alpha) {
  return small_as_possible(rho, ord, alpha, Target::Value);
}

AllocationRule sap_c(const Ratios& rho, const LineOrdering& ord, const Rational& alpha) {
  return small_as_possible(rho, ord, alpha, Target::Cost);
}

AllocationRule zap(const Instance& inst, const Rational& alpha) {
  return zap(ratios_from_values(inst), orderings_from_instance(inst), alpha);
}
AllocationRule sap_v(const Instance& inst, const Rational& alpha) {
  return sap_v(ratios_from_values(inst), orderings_from_instance(inst), alpha);
}
AllocationRule sap_c(const Instance& inst, const Rational& alpha) {
  return sap_c(ratios_from_values(inst), orderings_from_instance(inst), alpha);
}

TwoSatResult twosat_feasible(const Ratios& rho, const LineOrdering& ord, const Rational& alpha) {
  const auto& sp = rho.space();
  auto dg = build_dg(ord);
  const std::size_t nv = dg.vertex_count();
  const Rational limit = 1 / alpha;
  // Literal 2v: x1(v) = 1; literal 2v + 1: x1(v) = 0.
  Adjacency imp(2 * nv);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t w : dg.adj[v]) {
      imp[2 * v].push_back(2 * w);
      imp[2 * w + 1].push_back(2 * v + 1);
    }
  }
  for (std::size_t v = 0; v < dg.profiles; ++v) {
    if (rho.at(0, v) < limit) imp[2 * v].push_back(2 * v + 1);
    if (rho.at(1, v) < limit) imp[2 * v + 1].push_back(2 * v);
  }
  auto scc = strongly_connected_components(imp);
  TwoSatResult out;
  std::vector<int> winner(sp.size());
  for (std::size_t v = 0; v < nv; ++v) {
    if (scc.component[2 * v] == scc.component[2 * v + 1]) return out;
    if (v < dg.profiles) winner[v] = scc.component[2 * v] > scc.component[2 * v + 1] ? 0 : 1;
  }
  out.satisfiable = true;
  out.rule = AllocationRule::deterministic(2, sp.k(), winner);
  return out;
}

TwoSatResult twosat_feasible(const Instance& inst, const Rational& alpha) {
  return twosat_feasible(ratios_from_values(inst), orderings_from_instance(inst), alpha);
}

Rational twosat_min_ratio(const Ratios& rho, const LineOrdering& ord) {
  auto candidates = det_candidates(rho);
  return candidates[smallest_feasible(candidates, [&](const Rational& g) {
    return twosat_feasible(rho, ord, g).satisfiable;
  })];
}

bool is_single_crossing(const Instance& inst, const Rational& alpha) {
  if (!is_monotone(inst)) throw Error(ErrorCode::NotMonotone, "single crossing needs a monotone instance");
  const auto& sp = inst.space();
  const bool good = inst.mode() == Mode::Good;
  for (int i = 0; i < sp.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      for (int lo = 1; lo <= sp.k(); ++lo) {
        for (int hi = lo + 1; hi <= sp.k(); ++hi) {
          std::size_t a = sp.with_signal(base, i, lo);
          std::size_t b = sp.with_signal(base, i, hi);
          Rational own = alpha * (inst.entry(i, b) - inst.entry(i, a));
          for (int j = 0; j < sp.n(); ++j) {
            if (j == i) continue;
            Rational other = inst.entry(j, b) - inst.entry(j, a);
            if (good ? own < other : own > other) return false;
          }
        }
      }
    }
  }
  return true;
}

SolveReport solve_duo(const Ratios& rho, const LineOrdering& ord, Target target) {
  auto start = std::chrono::steady_clock::now();
  auto best = optimal_ratios(rho, ord);
  SolveReport report;
  report.target = target;
  report.path = SolvePath::Duo;
  report.ratio = best.of(target);
  switch (target) {
    case Target::Value: report.allocation = sap_v(rho, ord, report.ratio); break;
    case Target::Cost: report.allocation = sap_c(rho, ord, report.ratio); break;
    case Target::Det: report.allocation = zap(rho, ord, report.ratio); break;
  }
  if (const auto& pair = best.pair(target)) report.certificate = *pair;
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ivmech
