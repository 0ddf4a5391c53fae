#include "ivmech/simplex.hpp"

#include "ivmech/error.hpp"

#include <algorithm>
#include <sstream>

namespace ivmech {

const char* lp_status_name(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

void RationalLP::add(SparseRow coeffs, Relation relation, Rational rhs) {
  constraints.push_back({std::move(coeffs), relation, std::move(rhs)});
}

Rational RationalLP::evaluate(const SparseRow& row, const std::vector<Rational>& point) const {
  Rational acc = 0;
  for (const auto& [j, c] : row) acc += c * point[j];
  return acc;
}

void RationalLP::check_feasible(const std::vector<Rational>& point) const {
  if (point.size() != num_vars) throw Error(ErrorCode::NotFeasible, "point has the wrong dimension");
  for (std::size_t j = 0; j < num_vars; ++j) {
    if (sgn(point[j]) < 0) throw Error(ErrorCode::NotFeasible, "negative coordinate " + std::to_string(j));
  }
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const auto& c = constraints[r];
    Rational lhs = evaluate(c.coeffs, point);
    bool ok = c.relation == Relation::LessEq ? lhs <= c.rhs : c.relation == Relation::Equal ? lhs == c.rhs : lhs >= c.rhs;
    if (!ok) throw Error(ErrorCode::NotFeasible, "constraint " + std::to_string(r) + " violated");
  }
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), a_(rows, std::vector<Rational>(cols + 1)), obj_(cols + 1), basis_(rows), allowed_(cols, true) {}

  std::vector<Rational>& row(std::size_t i) { return a_[i]; }
  std::vector<Rational>& obj() { return obj_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<bool>& allowed() { return allowed_; }
  std::size_t rows() const { return a_.size(); }
  std::size_t rhs() const { return cols_; }
  std::size_t pivots() const { return pivots_; }

  void erase_row(std::size_t i) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    auto& pr = a_[r];
    Rational p = pr[c];
    nz_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(pr[j]) != 0) {
        pr[j] /= p;
        nz_.push_back(j);
      }
    }
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i != r) eliminate(a_[i], pr, c);
    }
    eliminate(obj_, pr, c);
    basis_[r] = c;
  }

  // Maximizes the objective row; false when unbounded.
  bool optimize() {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = a_.size();
      Rational best;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (sgn(a_[i][enter]) <= 0) continue;
        Rational ratio = a_[i][cols_] / a_[i][enter];
        if (leave == a_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
    }
  }

 private:
  void eliminate(std::vector<Rational>& target, const std::vector<Rational>& pr, std::size_t c) {
    if (sgn(target[c]) == 0) return;
    Rational f = target[c];
    for (std::size_t j : nz_) target[j] -= f * pr[j];
  }

  std::size_t cols_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
  std::vector<std::size_t> nz_;
  std::size_t pivots_ = 0;
};

}  // namespace

LPSolution simplex_solve(const RationalLP& lp) {
  const std::size_t nv = lp.num_vars;
  const std::size_t m = lp.constraints.size();
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  std::vector<Relation> rel(m);
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = lp.constraints[i].relation;
    if (sgn(lp.constraints[i].rhs) < 0) {
      flip[i] = -1;
      if (rel[i] == Relation::LessEq) {
        rel[i] = Relation::GreaterEq;
      } else if (rel[i] == Relation::GreaterEq) {
        rel[i] = Relation::LessEq;
      }
    }
    if (rel[i] != Relation::Equal) ++slack_count;
    if (rel[i] != Relation::LessEq) ++art_count;
  }
  const std::size_t art_begin = nv + slack_count;
  const std::size_t cols = art_begin + art_count;
  Tableau t(m, cols);

  std::size_t slack = nv;
  std::size_t art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.row(i);
    for (const auto& [j, c] : lp.constraints[i].coeffs) {
      row[j] = c;
      row[j].canonicalize();
      row[j] *= flip[i];
    }
    row[cols] = lp.constraints[i].rhs;
    row[cols].canonicalize();
    row[cols] *= flip[i];
    if (rel[i] == Relation::LessEq) {
      row[slack] = 1;
      t.basis()[i] = slack++;
    } else {
      if (rel[i] == Relation::GreaterEq) row[slack++] = -1;
      row[art] = 1;
      t.basis()[i] = art++;
    }
  }

  LPSolution sol;
  if (art_count > 0) {
    // Phase 1: maximize minus the sum of artificials.
    for (std::size_t j = art_begin; j < cols; ++j) t.obj()[j] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] >= art_begin) {
        for (std::size_t j = 0; j <= cols; ++j) {
          if (sgn(t.row(i)[j]) != 0) t.obj()[j] -= t.row(i)[j];
        }
      }
    }
    t.optimize();
    if (sgn(t.obj()[cols]) < 0) {
      sol.status = LPStatus::Infeasible;
      sol.pivots = t.pivots();
      return sol;
    }
    for (std::size_t i = t.rows(); i-- > 0;) {
      if (t.basis()[i] < art_begin) continue;
      std::size_t enter = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (sgn(t.row(i)[j]) != 0) {
          enter = j;
          break;
        }
      }
      if (enter == art_begin) {
        t.erase_row(i);
      } else {
        t.pivot(i, enter);
      }
    }
    for (std::size_t j = art_begin; j < cols; ++j) t.allowed()[j] = false;
  }

  // Phase 2 always maximizes; minimization negates the objective.
  std::fill(t.obj().begin(), t.obj().end(), Rational(0));
  const int sign = lp.sense == Sense::Maximize ? 1 : -1;
  for (const auto& [j, c] : lp.objective) {
    t.obj()[j] = c;
    t.obj()[j].canonicalize();
    t.obj()[j] *= -sign;
  }
  for (std::size_t i = 0; i < t.rows(); ++i) {
    std::size_t b = t.basis()[i];
    if (sgn(t.obj()[b]) == 0) continue;
    Rational f = t.obj()[b];
    for (std::size_t j = 0; j <= cols; ++j) {
      if (sgn(t.row(i)[j]) != 0) t.obj()[j] -= f * t.row(i)[j];
    }
  }
  bool bounded = t.optimize();
  sol.pivots = t.pivots();
  if (!bounded) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }
  sol.status = LPStatus::Optimal;
  sol.value = sign * t.obj()[cols];
  sol.point.assign(nv, Rational(0));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    std::size_t b = t.basis()[i];
    if (b < nv) sol.point[b] = t.row(i)[cols];
    sol.basis.push_back(b);
  }
  std::sort(sol.basis.begin(), sol.basis.end());
  return sol;
}

bool verify_vertex(const RationalLP& lp, const std::vector<Rational>& point) {
  lp.check_feasible(point);
  const std::size_t nv = lp.num_vars;
  std::vector<std::vector<Rational>> echelon;
  std::vector<std::size_t> pivot_col;
  auto absorb = [&](std::vector<Rational> row) {
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      std::size_t c = pivot_col[r];
      if (sgn(row[c]) == 0) continue;
      Rational f = row[c];
      for (std::size_t j = 0; j < nv; ++j) {
        if (sgn(echelon[r][j]) != 0) row[j] -= f * echelon[r][j];
      }
    }
    for (std::size_t j = 0; j < nv; ++j) {
      if (sgn(row[j]) != 0) {
        Rational p = row[j];
        for (auto& v : row) v /= p;
        echelon.push_back(std::move(row));
        pivot_col.push_back(j);
        return;
      }
    }
  };
  for (const auto& c : lp.constraints) {
    if (echelon.size() == nv) break;
    if (c.relation != Relation::Equal && lp.evaluate(c.coeffs, point) != c.rhs) continue;
    std::vector<Rational> row(nv);
    for (const auto& [j, v] : c.coeffs) row[j] = v;
    absorb(std::move(row));
  }
  for (std::size_t j = 0; j < nv && echelon.size() < nv; ++j) {
    if (sgn(point[j]) != 0) continue;
    std::vector<Rational> row(nv);
    row[j] = 1;
    absorb(std::move(row));
  }
  return echelon.size() == nv;
}

std::string lp_to_text(const RationalLP& lp) {
  auto name = [&](std::size_t j) { return j < lp.names.size() ? lp.names[j] : "v" + std::to_string(j); };
  auto term_list = [&](const SparseRow& row) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, c] : row) {
      if (sgn(c) == 0) continue;
      Rational mag = abs(c);
      os << (sgn(c) < 0 ? (first ? "- " : " - ") : (first ? "" : " + "));
      if (mag != 1) os << to_string(mag) << ' ';
      os << name(j);
      first = false;
    }
    if (first) os << "0 " << name(0);
    return os.str();
  };
  std::ostringstream os;
  os << "\\ exact rational LP, coefficients written as p/q\n";
  os << (lp.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: " << term_list(lp.objective) << "\n";
  os << "Subject To\n";
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    const auto& c = lp.constraints[r];
    const char* op = c.relation == Relation::LessEq ? "<=" : c.relation == Relation::Equal ? "=" : ">=";
    os << " c" << r << ": " << term_list(c.coeffs) << ' ' << op << ' ' << to_string(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars; ++j) os << " " << name(j) << " >= 0\n";
  os << "End\n";
  return os.str();
}

}  // namespace ivmech
