#include "ivmech/payments.hpp"

#include "ivmech/error.hpp"

#include <algorithm>
#include <numeric>

namespace ivmech {

PaymentRule::PaymentRule(int n, int k, std::vector<Rational> p) : space_(n, k), p_(std::move(p)) {
  if (p_.size() != static_cast<std::size_t>(n) * space_.size()) {
    throw Error(ErrorCode::InvalidInstance, "payments must hold n*k^n entries");
  }
  for (auto& v : p_) v.canonicalize();
}

std::vector<int> tau_order(const AllocationRule& x, const LineOrdering& ord, int agent, std::size_t line) {
  const auto& sp = ord.space();
  std::vector<int> order(sp.k());
  std::iota(order.begin(), order.end(), 1);
  auto at = [&](int s) { return sp.with_signal(line, agent, s); };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Rational& xa = x.at(agent, at(a));
    const Rational& xb = x.at(agent, at(b));
    if (xa != xb) return xa < xb;
    int ba = ord.block(agent, at(a));
    int bb = ord.block(agent, at(b));
    if (ba != bb) return ba < bb;
    return a < b;
  });
  return order;
}

std::vector<Rational> allocation_increments(const AllocationRule& x, const LineOrdering& ord, int agent, std::size_t line) {
  const auto& sp = ord.space();
  std::vector<Rational> delta(sp.k());
  // tau is sorted by x, so the max over predecessors is the previous entry.
  Rational prev = 0;
  for (int s : tau_order(x, ord, agent, line)) {
    const Rational& cur = x.at(agent, sp.with_signal(line, agent, s));
    delta[s - 1] = cur - prev;
    prev = cur;
  }
  return delta;
}

PaymentRule synthesize_payments(const Instance& inst, const AllocationRule& x) {
  auto ord = orderings_from_instance(inst);
  auto truth = is_truthful(x, ord);
  if (!truth.truthful) {
    const auto& v = *truth.violation;
    throw Error(ErrorCode::NotMonotone, "agent " + std::to_string(v.agent + 1) + " between " +
                                            inst.space().format(v.lower) + " and " + inst.space().format(v.higher));
  }
  const auto& sp = inst.space();
  std::vector<Rational> p(inst.table().size());
  for (int i = 0; i < inst.n(); ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      auto delta = allocation_increments(x, ord, i, base);
      Rational acc = 0;
      for (int s : tau_order(x, ord, i, base)) {
        std::size_t idx = sp.with_signal(base, i, s);
        acc += delta[s - 1] * inst.entry(i, idx);
        p[i * sp.size() + idx] = acc;
      }
    }
  }
  return PaymentRule(inst.n(), inst.k(), std::move(p));
}

Rational utility(const Instance& inst, const AllocationRule& x, const PaymentRule& p, int agent,
                 std::size_t bid, std::size_t truth) {
  if (inst.mode() == Mode::Good) return x.at(agent, bid) * inst.entry(agent, truth) - p.at(agent, bid);
  return p.at(agent, bid) - x.at(agent, bid) * inst.entry(agent, truth);
}

IcIrReport verify_ic_ir(const Instance& inst, const AllocationRule& x, const PaymentRule& p) {
  const auto& sp = inst.space();
  if (!(sp == x.space()) || !(sp == p.space())) throw Error(ErrorCode::WrongArity, "dimension mismatch");
  IcIrReport report;
  for (std::size_t s = 0; s < sp.size(); ++s) {
    for (int i = 0; i < inst.n(); ++i) {
      Rational honest = utility(inst, x, p, i, s, s);
      ++report.checked;
      if (sgn(honest) < 0) {
        report.ok = false;
        report.violation = IcIrViolation{s, i, sp.signal(s, i), true, honest, honest};
        return report;
      }
      for (int b = 1; b <= sp.k(); ++b) {
        std::size_t bid = sp.with_signal(s, i, b);
        Rational dev = utility(inst, x, p, i, bid, s);
        ++report.checked;
        if (dev > honest) {
          report.ok = false;
          report.violation = IcIrViolation{s, i, b, false, honest, dev};
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace ivmech
