#pragma once

#include "ivmech/model.hpp"

#include <optional>

namespace ivmech {

class PaymentRule {
 public:
  PaymentRule() = default;
  PaymentRule(int n, int k, std::vector<Rational> p);

  const ProfileSpace& space() const { return space_; }
  // p_i(b) at bid profile b.
  const Rational& at(int agent, std::size_t bid) const { return p_[agent * space_.size() + bid]; }
  const std::vector<Rational>& table() const { return p_; }

 private:
  ProfileSpace space_;
  std::vector<Rational> p_;
};

// Total extension of sigma on one agent line: (x ascending, block, signal).
std::vector<int> tau_order(const AllocationRule& x, const LineOrdering& ord, int agent, std::size_t line);

// delta x_i(t, s_{-i}) indexed by signal t - 1.
std::vector<Rational> allocation_increments(const AllocationRule& x, const LineOrdering& ord, int agent, std::size_t line);

PaymentRule synthesize_payments(const Instance& inst, const AllocationRule& x);

struct IcIrViolation {
  std::size_t profile = 0;  // true signals s
  int agent = 0;
  int bid = 0;              // deviating own report b_i
  bool individual_rationality = false;
  Rational truthful_utility;
  Rational deviation_utility;
};

struct IcIrReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<IcIrViolation> violation;
};

// u_i(b; s): good x_i(b) v_i(s) - p_i(b); chore p_i(b) - x_i(b) c_i(s).
Rational utility(const Instance& inst, const AllocationRule& x, const PaymentRule& p, int agent,
                 std::size_t bid, std::size_t truth);

IcIrReport verify_ic_ir(const Instance& inst, const AllocationRule& x, const PaymentRule& p);

}  // namespace ivmech
