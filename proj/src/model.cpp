#include "ivmech/model.hpp"

#include "ivmech/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ivmech {

namespace {

void canonicalize_all(std::vector<Rational>& table) {
  for (auto& q : table) q.canonicalize();
}

}  // namespace

const char* mode_name(Mode mode) { return mode == Mode::Good ? "good" : "chore"; }

const char* objective_name(Objective objective) { return objective == Objective::Value ? "value" : "cost"; }

ProfileSpace::ProfileSpace(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1) throw Error(ErrorCode::InvalidInstance, "n and k must be positive");
  strides_.resize(n);
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) {
    strides_[i] = size;
    if (size > kMaxProfiles / static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::TooLarge, "k^n exceeds the profile limit");
    }
    size *= static_cast<std::size_t>(k);
  }
  size_ = size;
}

std::size_t ProfileSpace::index(const Profile& s) const {
  if (static_cast<int>(s.size()) != n_) throw Error(ErrorCode::IndexOutOfRange, "profile length differs from n");
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i) {
    if (s[i] < 1 || s[i] > k_) throw Error(ErrorCode::IndexOutOfRange, "signal outside [1, k]");
    idx += static_cast<std::size_t>(s[i] - 1) * strides_[i];
  }
  return idx;
}

Profile ProfileSpace::decode(std::size_t idx) const {
  if (idx >= size_) throw Error(ErrorCode::IndexOutOfRange, "profile index out of range");
  Profile s(n_);
  for (int i = 0; i < n_; ++i) s[i] = signal(idx, i);
  return s;
}

std::vector<std::size_t> ProfileSpace::line_bases(int agent) const {
  std::vector<std::size_t> out;
  out.reserve(size_ / k_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    if (signal(idx, agent) == 1) out.push_back(idx);
  }
  return out;
}

std::string ProfileSpace::format(std::size_t idx) const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n_; ++i) os << (i ? "," : "") << signal(idx, i);
  os << ')';
  return os.str();
}

Instance::Instance(int n, int k, Mode mode, std::vector<Rational> table)
    : space_(n, k), mode_(mode), table_(std::move(table)) {
  if (table_.size() != static_cast<std::size_t>(n) * space_.size()) {
    throw Error(ErrorCode::InvalidInstance, "table must hold n*k^n entries");
  }
  canonicalize_all(table_);
  for (const auto& q : table_) {
    if (sgn(q) <= 0) throw Error(ErrorCode::InvalidInstance, "entries must be strictly positive");
  }
}

Rational Instance::value(int agent, std::size_t idx) const {
  if (mode_ == Mode::Good) return entry(agent, idx);
  return 1 / entry(agent, idx);
}

Rational Instance::cost(int agent, std::size_t idx) const {
  if (mode_ == Mode::Chore) return entry(agent, idx);
  return 1 / entry(agent, idx);
}

Ratios::Ratios(int n, int k, std::vector<Rational> rho) : space_(n, k), rho_(std::move(rho)) {
  if (rho_.size() != static_cast<std::size_t>(n) * space_.size()) {
    throw Error(ErrorCode::InvalidInstance, "ratio table must hold n*k^n entries");
  }
  canonicalize_all(rho_);
  for (std::size_t idx = 0; idx < space_.size(); ++idx) {
    bool has_one = false;
    for (int i = 0; i < n; ++i) {
      const Rational& r = at(i, idx);
      if (sgn(r) <= 0 || r > 1) throw Error(ErrorCode::InvalidInstance, "ratio outside (0, 1] at " + space_.format(idx));
      has_one = has_one || r == 1;
    }
    if (!has_one) throw Error(ErrorCode::InvalidInstance, "no ratio equal to 1 at " + space_.format(idx));
  }
}

Rational Ratios::min_entry() const { return *std::min_element(rho_.begin(), rho_.end()); }

LineOrdering::LineOrdering(int n, int k, std::vector<int> block) : space_(n, k), block_(std::move(block)) {
  if (block_.size() != static_cast<std::size_t>(n) * space_.size()) {
    throw Error(ErrorCode::InvalidInstance, "ordering must hold n*k^n entries");
  }
}

int LineOrdering::block_count(int agent, std::size_t idx) const {
  int top = 0;
  for (int s = 1; s <= space_.k(); ++s) top = std::max(top, block(agent, space_.with_signal(idx, agent, s)));
  return top + 1;
}

std::vector<std::vector<int>> LineOrdering::blocks(int agent, std::size_t idx) const {
  std::vector<std::vector<int>> out(block_count(agent, idx));
  for (int s = 1; s <= space_.k(); ++s) out[block(agent, space_.with_signal(idx, agent, s))].push_back(s);
  return out;
}

bool LineOrdering::is_total() const {
  for (int i = 0; i < space_.n(); ++i) {
    for (std::size_t base : space_.line_bases(i)) {
      if (block_count(i, base) != space_.k()) return false;
    }
  }
  return true;
}

bool LineOrdering::is_empty() const {
  return std::all_of(block_.begin(), block_.end(), [](int b) { return b == 0; });
}

AllocationRule::AllocationRule(int n, int k, std::vector<Rational> x) : space_(n, k), x_(std::move(x)) {
  if (x_.size() != static_cast<std::size_t>(n) * space_.size()) {
    throw Error(ErrorCode::InvalidInstance, "allocation must hold n*k^n entries");
  }
  canonicalize_all(x_);
  for (std::size_t idx = 0; idx < space_.size(); ++idx) {
    Rational sum = 0;
    for (int i = 0; i < n; ++i) {
      const Rational& v = at(i, idx);
      if (sgn(v) < 0 || v > 1) throw Error(ErrorCode::InvalidInstance, "allocation outside [0, 1] at " + space_.format(idx));
      sum += v;
    }
    if (sum != 1) throw Error(ErrorCode::InvalidInstance, "allocation does not sum to 1 at " + space_.format(idx));
  }
}

AllocationRule AllocationRule::deterministic(int n, int k, const std::vector<int>& winner) {
  ProfileSpace space(n, k);
  if (winner.size() != space.size()) throw Error(ErrorCode::InvalidInstance, "one winner per profile required");
  std::vector<Rational> x(static_cast<std::size_t>(n) * space.size(), Rational(0));
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    if (winner[idx] < 0 || winner[idx] >= n) throw Error(ErrorCode::InvalidInstance, "winner outside [0, n)");
    x[winner[idx] * space.size() + idx] = 1;
  }
  return AllocationRule(n, k, std::move(x));
}

AllocationRule AllocationRule::uniform(int n, int k) {
  ProfileSpace space(n, k);
  return AllocationRule(n, k, std::vector<Rational>(static_cast<std::size_t>(n) * space.size(), Rational(1, n)));
}

bool AllocationRule::is_deterministic() const {
  return std::all_of(x_.begin(), x_.end(), [](const Rational& v) { return v == 0 || v == 1; });
}

std::vector<int> AllocationRule::winners() const {
  std::vector<int> out(space_.size(), -1);
  for (std::size_t idx = 0; idx < space_.size(); ++idx) {
    for (int i = 0; i < n(); ++i) {
      if (at(i, idx) == 1) out[idx] = i;
    }
  }
  return out;
}

Ratios ratios_from_values(const Instance& inst) {
  const auto& sp = inst.space();
  std::vector<Rational> rho(inst.table().size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    if (inst.mode() == Mode::Good) {
      Rational best = inst.entry(0, idx);
      for (int i = 1; i < inst.n(); ++i) best = std::max(best, inst.entry(i, idx));
      for (int i = 0; i < inst.n(); ++i) rho[i * sp.size() + idx] = inst.entry(i, idx) / best;
    } else {
      Rational best = inst.entry(0, idx);
      for (int i = 1; i < inst.n(); ++i) best = std::min(best, inst.entry(i, idx));
      for (int i = 0; i < inst.n(); ++i) rho[i * sp.size() + idx] = best / inst.entry(i, idx);
    }
  }
  return Ratios(inst.n(), inst.k(), std::move(rho));
}

LineOrdering orderings_from_instance(const Instance& inst) {
  const auto& sp = inst.space();
  const int k = sp.k();
  std::vector<int> block(inst.table().size(), 0);
  std::vector<int> order(k);
  for (int i = 0; i < inst.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      // Goods ascend by value; chores descend by cost. Both mean ascending v.
      auto key = [&](int s) -> const Rational& { return inst.entry(i, base + (s - 1) * sp.stride(i)); };
      std::iota(order.begin(), order.end(), 1);
      if (inst.mode() == Mode::Good) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
      } else {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) > key(b); });
      }
      int current = 0;
      for (int pos = 0; pos < k; ++pos) {
        if (pos > 0 && key(order[pos]) != key(order[pos - 1])) ++current;
        block[i * sp.size() + base + (order[pos] - 1) * sp.stride(i)] = current;
      }
    }
  }
  return LineOrdering(inst.n(), k, std::move(block));
}

namespace {

int profile_level(const ProfileSpace& sp, std::size_t idx) {
  int level = 0;
  for (int i = 0; i < sp.n(); ++i) level += sp.signal(idx, i);
  return level;
}

}  // namespace

Instance values_from_ratios(const Ratios& rho, Mode mode) {
  const auto& sp = rho.space();
  Rational base = rho.min_entry() / 2;
  std::vector<Rational> table(rho.table().size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    Rational scale = 1;
    int level = profile_level(sp, idx);
    for (int l = 0; l < level; ++l) scale *= base;
    for (int i = 0; i < rho.n(); ++i) {
      Rational v = rho.at(i, idx) / scale;
      table[i * sp.size() + idx] = mode == Mode::Good ? v : Rational(1 / v);
    }
  }
  return Instance(rho.n(), rho.k(), mode, std::move(table));
}

Rational sos_threshold(int n, int k) {
  Rational nk = static_cast<long>(n) * k;
  return 1 - 1 / (nk * nk + 1);
}

Instance sos_values_from_ratios(const Ratios& rho, Mode mode) {
  const auto& sp = rho.space();
  if (rho.min_entry() < sos_threshold(rho.n(), rho.k())) {
    throw Error(ErrorCode::PreconditionViolation, "r*(rho) is below 1 - 1/((nk)^2 + 1)");
  }
  const long two_nk = 2L * rho.n() * rho.k();
  std::vector<Rational> table(rho.table().size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    long level = profile_level(sp, idx);
    Rational a = level * (two_nk - level);
    for (int i = 0; i < rho.n(); ++i) {
      Rational v = rho.at(i, idx) * (a + 1);
      table[i * sp.size() + idx] = mode == Mode::Good ? v : Rational(1 / v);
    }
  }
  return Instance(rho.n(), rho.k(), mode, std::move(table));
}

Rational profile_ratio(const Ratios& rho, const AllocationRule& x, Objective objective, std::size_t idx) {
  Rational acc = 0;
  for (int i = 0; i < rho.n(); ++i) {
    if (objective == Objective::Value) {
      acc += x.at(i, idx) * rho.at(i, idx);
    } else {
      acc += x.at(i, idx) / rho.at(i, idx);
    }
  }
  if (objective == Objective::Value) return 1 / acc;
  return acc;
}

Rational eval_ratio(const Ratios& rho, const AllocationRule& x, Objective objective) {
  if (!(rho.space() == x.space())) throw Error(ErrorCode::WrongArity, "ratio and allocation dimensions differ");
  Rational worst = 1;
  for (std::size_t idx = 0; idx < rho.space().size(); ++idx) {
    worst = std::max(worst, profile_ratio(rho, x, objective, idx));
  }
  return worst;
}

TruthReport is_truthful(const AllocationRule& x, const LineOrdering& ord) {
  const auto& sp = ord.space();
  if (!(sp == x.space())) throw Error(ErrorCode::WrongArity, "allocation and ordering dimensions differ");
  for (int i = 0; i < sp.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      for (int a = 1; a <= sp.k(); ++a) {
        std::size_t pa = base + (a - 1) * sp.stride(i);
        for (int b = 1; b <= sp.k(); ++b) {
          std::size_t pb = base + (b - 1) * sp.stride(i);
          if (ord.precedes(i, pa, pb) && x.at(i, pa) > x.at(i, pb)) {
            return {false, MonotonicityViolation{i, pa, pb}};
          }
        }
      }
    }
  }
  return {};
}

namespace {

template <typename Cmp>
bool lines_satisfy(const Instance& inst, Cmp cmp) {
  const auto& sp = inst.space();
  for (int i = 0; i < inst.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      for (int s = 1; s < sp.k(); ++s) {
        const Rational& lo = inst.entry(i, base + (s - 1) * sp.stride(i));
        const Rational& hi = inst.entry(i, base + s * sp.stride(i));
        if (!cmp(lo, hi)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_strictly_monotone(const Instance& inst) {
  if (inst.mode() == Mode::Good) return lines_satisfy(inst, [](const Rational& a, const Rational& b) { return a < b; });
  return lines_satisfy(inst, [](const Rational& a, const Rational& b) { return a > b; });
}

bool is_monotone(const Instance& inst) {
  if (inst.mode() == Mode::Good) return lines_satisfy(inst, [](const Rational& a, const Rational& b) { return a <= b; });
  return lines_satisfy(inst, [](const Rational& a, const Rational& b) { return a >= b; });
}

bool is_sos(const Instance& inst) {
  const auto& sp = inst.space();
  const int n = sp.n();
  const int k = sp.k();
  // Marginal of agent i's entry when agent j moves from s_j to s_j + delta.
  auto marginal = [&](int i, int j, std::size_t base, int sj, int delta) {
    const Rational& lo = inst.entry(i, base + (sj - 1) * sp.stride(j));
    const Rational& hi = inst.entry(i, base + (sj + delta - 1) * sp.stride(j));
    return inst.mode() == Mode::Good ? Rational(hi - lo) : Rational(lo - hi);
  };
  auto dominated = [&](std::size_t a, std::size_t b) {
    for (int t = 0; t < n; ++t) {
      if (sp.signal(a, t) > sp.signal(b, t)) return false;
    }
    return true;
  };
  for (int j = 0; j < n; ++j) {
    auto bases = sp.line_bases(j);
    for (std::size_t low : bases) {
      for (std::size_t high : bases) {
        if (!dominated(low, high)) continue;
        for (int i = 0; i < n; ++i) {
          for (int sj = 1; sj < k; ++sj) {
            for (int delta = 1; sj + delta <= k; ++delta) {
              if (marginal(i, j, low, sj, delta) < marginal(i, j, high, sj, delta)) return false;
            }
          }
        }
      }
    }
  }
  return true;
}

std::vector<Rational> det_candidates(const Ratios& rho) {
  std::vector<Rational> out;
  out.reserve(rho.table().size() + 1);
  out.emplace_back(1);
  for (const auto& r : rho.table()) out.push_back(1 / r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ivmech
