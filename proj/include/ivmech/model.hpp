#pragma once

#include "ivmech/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ivmech {

enum class Mode { Good, Chore };
enum class Objective { Value, Cost };

const char* mode_name(Mode mode);
const char* objective_name(Objective objective);

// Signals are 1-based as in the model; agents are 0-based indices.
using Profile = std::vector<int>;

// The grid [k]^n with agent 0 as the least significant digit.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  ProfileSpace(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int agent) const { return strides_[agent]; }

  std::size_t index(const Profile& s) const;
  Profile decode(std::size_t idx) const;
  int signal(std::size_t idx, int agent) const {
    return static_cast<int>((idx / strides_[agent]) % k_) + 1;
  }
  std::size_t with_signal(std::size_t idx, int agent, int signal) const {
    return idx - (this->signal(idx, agent) - 1) * strides_[agent] + (signal - 1) * strides_[agent];
  }
  // Index of the profile on the same agent line with own signal 1.
  std::size_t line_base(std::size_t idx, int agent) const { return with_signal(idx, agent, 1); }
  // Bases of every agent line, in increasing order.
  std::vector<std::size_t> line_bases(int agent) const;

  std::string format(std::size_t idx) const;

  bool operator==(const ProfileSpace& o) const { return n_ == o.n_ && k_ == o.k_; }

 private:
  int n_ = 0;
  int k_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

// Largest profile count accepted by table-building code.
inline constexpr std::size_t kMaxProfiles = std::size_t{1} << 24;

class Instance {
 public:
  Instance() = default;
  // table is agent-major: table[i * k^n + idx].
  Instance(int n, int k, Mode mode, std::vector<Rational> table);

  const ProfileSpace& space() const { return space_; }
  int n() const { return space_.n(); }
  int k() const { return space_.k(); }
  Mode mode() const { return mode_; }

  const Rational& entry(int agent, std::size_t idx) const { return table_[agent * space_.size() + idx]; }
  Rational value(int agent, std::size_t idx) const;
  Rational cost(int agent, std::size_t idx) const;
  const std::vector<Rational>& table() const { return table_; }

 private:
  ProfileSpace space_;
  Mode mode_ = Mode::Good;
  std::vector<Rational> table_;
};

class Ratios {
 public:
  Ratios() = default;
  Ratios(int n, int k, std::vector<Rational> rho);

  const ProfileSpace& space() const { return space_; }
  int n() const { return space_.n(); }
  int k() const { return space_.k(); }
  const Rational& at(int agent, std::size_t idx) const { return rho_[agent * space_.size() + idx]; }
  const std::vector<Rational>& table() const { return rho_; }
  Rational min_entry() const;

 private:
  ProfileSpace space_;
  std::vector<Rational> rho_;
};

// Per agent line, an ordered partition of own signals into tie blocks.
class LineOrdering {
 public:
  LineOrdering() = default;
  // block[i * k^n + idx] is the 0-based block of idx's own signal on its agent-i line.
  LineOrdering(int n, int k, std::vector<int> block);

  const ProfileSpace& space() const { return space_; }
  int block(int agent, std::size_t idx) const { return block_[agent * space_.size() + idx]; }
  int block_count(int agent, std::size_t idx) const;
  // (s_i, s'_i) in sigma_i(s_{-i}) for two profiles on the same agent line.
  bool precedes(int agent, std::size_t a, std::size_t b) const { return block(agent, a) < block(agent, b); }
  // Signals of each block, lowest block first.
  std::vector<std::vector<int>> blocks(int agent, std::size_t idx) const;
  bool is_total() const;
  bool is_empty() const;

 private:
  ProfileSpace space_;
  std::vector<int> block_;
};

class AllocationRule {
 public:
  AllocationRule() = default;
  // Validates x_i(s) in [0,1] and per-profile sums of 1.
  AllocationRule(int n, int k, std::vector<Rational> x);

  static AllocationRule deterministic(int n, int k, const std::vector<int>& winner);
  static AllocationRule uniform(int n, int k);

  const ProfileSpace& space() const { return space_; }
  int n() const { return space_.n(); }
  int k() const { return space_.k(); }
  const Rational& at(int agent, std::size_t idx) const { return x_[agent * space_.size() + idx]; }
  const std::vector<Rational>& table() const { return x_; }
  bool is_deterministic() const;
  // Selected agent per profile; only meaningful when deterministic.
  std::vector<int> winners() const;

 private:
  ProfileSpace space_;
  std::vector<Rational> x_;
};

struct MonotonicityViolation {
  int agent = 0;
  std::size_t lower = 0;   // profile whose own signal is sigma-smaller
  std::size_t higher = 0;  // profile with the larger own signal but smaller x
};

struct TruthReport {
  bool truthful = true;
  std::optional<MonotonicityViolation> violation;
};

Ratios ratios_from_values(const Instance& inst);
LineOrdering orderings_from_instance(const Instance& inst);
Instance values_from_ratios(const Ratios& rho, Mode mode);
Instance sos_values_from_ratios(const Ratios& rho, Mode mode);
// Lower threshold on r*(rho) accepted by sos_values_from_ratios.
Rational sos_threshold(int n, int k);

Rational eval_ratio(const Ratios& rho, const AllocationRule& x, Objective objective);
// Ratio achieved at a single profile.
Rational profile_ratio(const Ratios& rho, const AllocationRule& x, Objective objective, std::size_t idx);

TruthReport is_truthful(const AllocationRule& x, const LineOrdering& ord);

// Checks strict monotonicity along every line (increasing values / decreasing costs).
bool is_strictly_monotone(const Instance& inst);
// Non-strict variant, used as the precondition of the single-crossing test.
bool is_monotone(const Instance& inst);
// Diminishing marginal values over signals, checked exhaustively.
bool is_sos(const Instance& inst);

// Sorted distinct {1/rho_i(s)} together with 1: the possible values of R_D*.
std::vector<Rational> det_candidates(const Ratios& rho);

// Index of the first candidate accepted by a monotone predicate; the last
// candidate is assumed feasible (every agent is acceptable there).
template <typename Pred>
std::size_t smallest_feasible(const std::vector<Rational>& candidates, Pred feasible) {
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace ivmech
