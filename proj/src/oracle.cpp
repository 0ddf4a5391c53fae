#include "ivmech/oracle.hpp"

#include "ivmech/binary.hpp"
#include "ivmech/duo.hpp"
#include "ivmech/error.hpp"
#include "ivmech/lp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>

#include <limits>
#include <optional>

namespace ivmech {

namespace {

// Depth-first search over winner vectors in profile index order.
class DetSearch {
 public:
  DetSearch(const Ratios& rho, const LineOrdering& ord)
      : sp_(rho.space()), ord_(ord), n_(sp_.n()), N_(sp_.size()), candidates_(det_candidates(rho)) {
    rank_.resize(n_ * N_);
    for (int i = 0; i < n_; ++i) {
      for (std::size_t idx = 0; idx < N_; ++idx) {
        Rational r = 1 / rho.at(i, idx);
        rank_[i * N_ + idx] =
            static_cast<int>(std::lower_bound(candidates_.begin(), candidates_.end(), r) - candidates_.begin());
      }
    }
    winner_.assign(N_, -1);
  }

  bool consistent(std::size_t idx, int w) const {
    for (int i = 0; i < n_; ++i) {
      const int own = ord_.block(i, idx);
      for (int t = 1; t <= sp_.k(); ++t) {
        std::size_t p = sp_.with_signal(idx, i, t);
        if (p >= idx) continue;
        int b = ord_.block(i, p);
        if (b < own && winner_[p] == i && w != i) return false;
        if (b > own && w == i && winner_[p] != i) return false;
      }
    }
    return true;
  }

  int rank(int agent, std::size_t idx) const { return rank_[agent * N_ + idx]; }

  // Runs from depth `pos`, with winner_[0..pos) already fixed.
  void run(std::size_t pos, int cur, const std::atomic<int>* shared = nullptr) {
    ++nodes_;
    if (shared && cur > shared->load(std::memory_order_relaxed)) return;
    if (pos == N_) {
      best_ = cur;
      best_winner_ = winner_;
      return;
    }
    for (int w = 0; w < n_; ++w) {
      int next = std::max(cur, rank(w, pos));
      if (next >= best_ || !consistent(pos, w)) continue;
      winner_[pos] = w;
      run(pos + 1, next, shared);
      winner_[pos] = -1;
    }
  }

  // Consistent prefixes of length depth, in lexicographic order.
  void prefixes(std::size_t pos, std::size_t depth, std::vector<std::vector<int>>& out) {
    if (pos == depth) {
      out.emplace_back(winner_.begin(), winner_.begin() + depth);
      return;
    }
    for (int w = 0; w < n_; ++w) {
      if (!consistent(pos, w)) continue;
      winner_[pos] = w;
      prefixes(pos + 1, depth, out);
      winner_[pos] = -1;
    }
  }

  void load_prefix(const std::vector<int>& prefix) {
    std::fill(winner_.begin(), winner_.end(), -1);
    std::copy(prefix.begin(), prefix.end(), winner_.begin());
  }

  int prefix_rank(const std::vector<int>& prefix) const {
    int r = 0;
    for (std::size_t idx = 0; idx < prefix.size(); ++idx) r = std::max(r, rank(prefix[idx], idx));
    return r;
  }

  bool found() const { return !best_winner_.empty(); }
  int best() const { return best_; }
  const std::vector<int>& best_winner() const { return best_winner_; }
  std::size_t nodes() const { return nodes_; }
  const Rational& candidate(int r) const { return candidates_[r]; }

 private:
  const ProfileSpace& sp_;
  const LineOrdering& ord_;
  int n_;
  std::size_t N_;
  std::vector<Rational> candidates_;
  std::vector<int> rank_;
  std::vector<int> winner_;
  std::vector<int> best_winner_;
  int best_ = std::numeric_limits<int>::max();
  std::size_t nodes_ = 0;
};

void check_cap(const ProfileSpace& sp, const BruteForceOptions& opt) {
  double log_size = static_cast<double>(sp.size()) * std::log(static_cast<double>(sp.n()));
  if (log_size > std::log(opt.size_cap) && !opt.allow_backtracking) {
    throw Error(ErrorCode::TooLarge, "n^(k^n) exceeds the enumeration cap");
  }
}

BruteForceResult finish(const ProfileSpace& sp, const Rational& ratio, const std::vector<int>& winner, std::size_t nodes) {
  return BruteForceResult{ratio, AllocationRule::deterministic(sp.n(), sp.k(), winner), nodes};
}

}  // namespace

BruteForceResult brute_force_det_serial(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt) {
  check_cap(rho.space(), opt);
  DetSearch search(rho, ord);
  search.run(0, 0);
  return finish(rho.space(), search.candidate(search.best()), search.best_winner(), search.nodes());
}

BruteForceResult brute_force_det(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt) {
  const auto& sp = rho.space();
  check_cap(sp, opt);
  std::size_t depth = 0;
  for (std::size_t count = 1; count < 256 && depth < sp.size(); ++depth) count *= sp.n();
  std::vector<std::vector<int>> shards;
  DetSearch proto(rho, ord);
  proto.prefixes(0, depth, shards);
  std::atomic<int> bound{std::numeric_limits<int>::max()};

  const std::size_t S = shards.size();
  std::vector<int> best(S, std::numeric_limits<int>::max());
  std::vector<std::vector<int>> winners(S);
  std::vector<std::size_t> nodes(S, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < S; ++s) {
    DetSearch search = proto;
    search.load_prefix(shards[s]);
    search.run(depth, search.prefix_rank(shards[s]), &bound);
    nodes[s] = search.nodes();
    if (search.found()) {
      best[s] = search.best();
      winners[s] = search.best_winner();
      int seen = bound.load();
      while (best[s] < seen && !bound.compare_exchange_weak(seen, best[s])) {
      }
    }
  }
  std::size_t pick = 0;
  std::size_t total = 0;
  for (std::size_t s = 0; s < S; ++s) {
    total += nodes[s];
    if (best[s] < best[pick]) pick = s;
  }
  return finish(sp, proto.candidate(best[pick]), winners[pick], total);
}

const char* propagation_status_name(PropagationStatus s) {
  switch (s) {
    case PropagationStatus::Feasible: return "feasible";
    case PropagationStatus::Infeasible: return "infeasible";
    case PropagationStatus::Timeout: return "timeout";
  }
  return "?";
}

namespace {

class Propagator {
 public:
  Propagator(const LineOrdering& ord) : sp_(ord.space()), ord_(ord), n_(sp_.n()), N_(sp_.size()) {
    val_.assign(n_ * N_, kUnknown);
  }

  // Queues x_i(p) = v; false on contradiction.
  bool assign(int i, std::size_t p, bool v) {
    signed char& cell = val_[i * N_ + p];
    if (cell != kUnknown) return cell == static_cast<signed char>(v);
    cell = static_cast<signed char>(v);
    trail_.push_back(i * N_ + p);
    queue_.push_back(i * N_ + p);
    return true;
  }

  bool propagate() {
    while (head_ < queue_.size()) {
      std::size_t cell = queue_[head_++];
      int i = static_cast<int>(cell / N_);
      std::size_t p = cell % N_;
      int own = ord_.block(i, p);
      if (val_[cell] == 1) {
        for (int j = 0; j < n_; ++j)
          if (j != i && !assign(j, p, false)) return fail();
        for (int t = 1; t <= sp_.k(); ++t) {
          std::size_t q = sp_.with_signal(p, i, t);
          if (ord_.block(i, q) > own && !assign(i, q, true)) return fail();
        }
      } else {
        for (int t = 1; t <= sp_.k(); ++t) {
          std::size_t q = sp_.with_signal(p, i, t);
          if (ord_.block(i, q) < own && !assign(i, q, false)) return fail();
        }
        int open = -1;
        int unknown = 0;
        for (int j = 0; j < n_; ++j) {
          signed char v = val_[j * N_ + p];
          if (v == 1) {
            unknown = -1;
            break;
          }
          if (v == kUnknown) {
            ++unknown;
            open = j;
          }
        }
        if (unknown == 0) return fail();
        if (unknown == 1 && !assign(open, p, true)) return fail();
      }
    }
    return true;
  }

  // Profile with no selected agent and fewest open candidates.
  std::optional<std::pair<int, std::size_t>> choose() const {
    std::optional<std::pair<int, std::size_t>> pick;
    int fewest = n_ + 1;
    for (std::size_t p = 0; p < N_; ++p) {
      int unknown = 0;
      int last = -1;
      bool done = false;
      for (int j = 0; j < n_; ++j) {
        signed char v = val_[j * N_ + p];
        if (v == 1) done = true;
        if (v == kUnknown) {
          last = j;
          ++unknown;
        }
      }
      if (done || unknown >= fewest) continue;
      fewest = unknown;
      // Highest agent first: on the reduction instances it is the unconstrained filler.
      pick = std::make_pair(last, p);
      if (fewest == 2) break;
    }
    return pick;
  }

  std::size_t mark() const { return trail_.size(); }

  void undo(std::size_t to) {
    while (trail_.size() > to) {
      val_[trail_.back()] = kUnknown;
      trail_.pop_back();
    }
    queue_.clear();
    head_ = 0;
  }

  std::vector<int> winners() const {
    std::vector<int> w(N_, 0);
    for (std::size_t p = 0; p < N_; ++p)
      for (int j = 0; j < n_; ++j)
        if (val_[j * N_ + p] == 1) w[p] = j;
    return w;
  }

 private:
  static constexpr signed char kUnknown = -1;

  bool fail() {
    queue_.clear();
    head_ = 0;
    return false;
  }

  const ProfileSpace& sp_;
  const LineOrdering& ord_;
  int n_;
  std::size_t N_;
  std::vector<signed char> val_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  std::size_t head_ = 0;
};

}  // namespace

PropagationResult propagate_feasible(const Ratios& rho, const LineOrdering& ord, const Rational& gamma,
                                     std::size_t budget, const std::vector<Pin>& pins) {
  const auto& sp = rho.space();
  PropagationResult out;
  Propagator prop(ord);
  bool ok = true;
  for (int i = 0; i < sp.n() && ok; ++i)
    for (std::size_t p = 0; p < sp.size() && ok; ++p)
      if (!acceptable(rho, i, p, gamma)) ok = prop.assign(i, p, false);
  for (const auto& pin : pins) ok = ok && prop.assign(pin.agent, pin.profile, pin.selected);
  if (!ok || !prop.propagate()) return out;

  struct Frame {
    std::size_t mark;
    int agent;
    std::size_t profile;
    bool second;
  };
  std::vector<Frame> frames;
  while (true) {
    auto pick = prop.choose();
    if (!pick) {
      out.status = PropagationStatus::Feasible;
      out.rule = AllocationRule::deterministic(sp.n(), sp.k(), prop.winners());
      return out;
    }
    if (++out.nodes > budget) {
      out.status = PropagationStatus::Timeout;
      return out;
    }
    frames.push_back({prop.mark(), pick->first, pick->second, false});
    if (prop.assign(pick->first, pick->second, true) && prop.propagate()) continue;
    // Backtrack to the latest frame with an untried branch.
    while (true) {
      if (frames.empty()) return out;
      Frame& f = frames.back();
      prop.undo(f.mark);
      if (f.second) {
        frames.pop_back();
        continue;
      }
      f.second = true;
      if (prop.assign(f.agent, f.profile, false) && prop.propagate()) break;
    }
  }
}

namespace {

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SolveReport solve_det_propagation(const Ratios& rho, const LineOrdering& ord, std::size_t budget) {
  auto start = std::chrono::steady_clock::now();
  auto candidates = det_candidates(rho);
  std::optional<AllocationRule> witness;
  std::size_t pick = smallest_feasible(candidates, [&](const Rational& g) {
    auto r = propagate_feasible(rho, ord, g, budget);
    if (r.status == PropagationStatus::Timeout) throw Error(ErrorCode::TooLarge, "propagation budget exhausted");
    return r.status == PropagationStatus::Feasible;
  });
  auto r = propagate_feasible(rho, ord, candidates[pick], budget);
  if (r.status != PropagationStatus::Feasible) throw Error(ErrorCode::TooLarge, "propagation budget exhausted");
  SolveReport report;
  report.target = Target::Det;
  report.path = SolvePath::Propagation;
  report.allocation = *r.rule;
  report.ratio = eval_ratio(rho, report.allocation, Objective::Value);
  report.wall_ms = since(start);
  return report;
}

SolveReport solve_det_oracle(const Ratios& rho, const LineOrdering& ord, BruteForceOptions opt) {
  auto start = std::chrono::steady_clock::now();
  auto r = brute_force_det(rho, ord, opt);
  SolveReport report;
  report.target = Target::Det;
  report.path = SolvePath::Oracle;
  report.allocation = r.rule;
  report.ratio = r.ratio;
  report.wall_ms = since(start);
  return report;
}

const char* mismatch_name(Mismatch m) {
  switch (m) {
    case Mismatch::None: return "none";
    case Mismatch::WrongShape: return "wrong-shape";
    case Mismatch::NotTruthful: return "not-truthful";
    case Mismatch::RatioMismatch: return "ratio-mismatch";
    case Mismatch::CertificateInvalid: return "certificate-invalid";
  }
  return "?";
}

namespace {

VerifyResult reject(Mismatch reason, std::string detail) { return VerifyResult{false, reason, std::move(detail)}; }

VerifyResult check_pair(const Ratios& rho, const LineOrdering& ord, const SolveReport& report, const ConflictPair& pair) {
  const auto& sp = rho.space();
  if (sp.n() != 2 || pair.source >= sp.size() || pair.sink >= sp.size()) {
    return reject(Mismatch::CertificateInvalid, "conflict pair outside the two-agent grid");
  }
  if (pair.kind != report.target) return reject(Mismatch::CertificateInvalid, "conflict pair kind differs from target");
  if (!precedes(build_dg(ord), pair.source, pair.sink)) {
    return reject(Mismatch::CertificateInvalid, "source does not precede sink");
  }
  const Rational& u = rho.at(1, pair.source);
  const Rational& v = rho.at(0, pair.sink);
  Rational bound;
  switch (pair.kind) {
    case Target::Value: bound = 1 / conflict_function(u, v); break;
    case Target::Cost: bound = conflict_function(1 / u, 1 / v); break;
    case Target::Det: bound = std::min(Rational(1 / u), Rational(1 / v)); break;
  }
  bound.canonicalize();
  if (bound != pair.bound) return reject(Mismatch::CertificateInvalid, "bound " + to_string(pair.bound) + " != " + to_string(bound));
  if (bound != report.ratio) return reject(Mismatch::CertificateInvalid, "conflict bound does not match the ratio");
  return {};
}

VerifyResult check_matching(const Ratios& rho, const LineOrdering& ord, const SolveReport& report,
                            const MatchingCertificate& cert) {
  if (rho.space().k() != 2) return reject(Mismatch::CertificateInvalid, "matching certificate needs k = 2");
  if (cert.gamma != report.ratio) return reject(Mismatch::CertificateInvalid, "gamma differs from the ratio");
  auto g = build_match_graph(rho, ord, cert.gamma);
  if (g.must_match != cert.must_match) return reject(Mismatch::CertificateInvalid, "must-match set differs");
  std::vector<bool> used(rho.space().size(), false);
  for (const auto& [a, b] : cert.edges) {
    bool known = std::any_of(g.edges.begin(), g.edges.end(), [&](const MatchEdge& e) {
      return (e.lower == a && e.upper == b) || (e.lower == b && e.upper == a);
    });
    if (!known) return reject(Mismatch::CertificateInvalid, "edge not in the graph");
    if (used[a] || used[b]) return reject(Mismatch::CertificateInvalid, "edges share a profile");
    used[a] = used[b] = true;
  }
  for (std::size_t v : g.must_match)
    if (!used[v]) return reject(Mismatch::CertificateInvalid, "must-match profile uncovered");
  return {};
}

VerifyResult check_lp(const Ratios& rho, const LineOrdering& ord, const SolveReport& report, const LpCertificate& cert) {
  RationalLP lp;
  Rational expected;
  if (report.target == Target::Value) {
    lp = val_lp(rho, ord);
    expected = 1 / report.ratio;
  } else if (report.target == Target::Cost) {
    lp = cst_lp(rho, ord);
    expected = report.ratio;
  } else {
    return {};
  }
  if (cert.point.size() != lp.num_vars) return reject(Mismatch::CertificateInvalid, "LP point has wrong length");
  try {
    lp.check_feasible(cert.point);
  } catch (const Error& e) {
    return reject(Mismatch::CertificateInvalid, e.what());
  }
  if (lp.evaluate(lp.objective, cert.point) != expected || cert.objective != expected) {
    return reject(Mismatch::CertificateInvalid, "LP objective does not match the ratio");
  }
  return {};
}

}  // namespace

VerifyResult verify_report(const Ratios& rho, const LineOrdering& ord, const SolveReport& report) {
  const auto& sp = rho.space();
  const auto& x = report.allocation;
  if (!(x.space() == sp) || !(ord.space() == sp)) return reject(Mismatch::WrongShape, "dimension mismatch");
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    Rational total = 0;
    for (int i = 0; i < sp.n(); ++i) {
      if (sgn(x.at(i, idx)) < 0 || x.at(i, idx) > 1) return reject(Mismatch::WrongShape, "entry outside [0,1]");
      total += x.at(i, idx);
    }
    if (total != 1) return reject(Mismatch::WrongShape, "allocation at " + sp.format(idx) + " does not sum to 1");
  }
  if (report.target == Target::Det && !x.is_deterministic()) return reject(Mismatch::WrongShape, "witness is not deterministic");
  auto truth = is_truthful(x, ord);
  if (!truth.truthful) {
    const auto& v = *truth.violation;
    return reject(Mismatch::NotTruthful, "agent " + std::to_string(v.agent + 1) + " " + sp.format(v.lower) + " " +
                                             sp.format(v.higher));
  }
  Objective obj = report.target == Target::Cost ? Objective::Cost : Objective::Value;
  Rational achieved = eval_ratio(rho, x, obj);
  if (achieved != report.ratio) {
    return reject(Mismatch::RatioMismatch, "reported " + to_string(report.ratio) + ", witness achieves " + to_string(achieved));
  }
  if (const auto* pair = std::get_if<ConflictPair>(&report.certificate)) return check_pair(rho, ord, report, *pair);
  if (const auto* cert = std::get_if<MatchingCertificate>(&report.certificate)) return check_matching(rho, ord, report, *cert);
  if (const auto* cert = std::get_if<LpCertificate>(&report.certificate)) return check_lp(rho, ord, report, *cert);
  return {};
}

}  // namespace ivmech
