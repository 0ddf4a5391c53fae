#include "ivmech/gen.hpp"

#include "ivmech/error.hpp"
#include "ivmech/lp.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace ivmech {

namespace {

Error malformed(int line, const std::string& what) {
  return Error(ErrorCode::MalformedFormula, "line " + std::to_string(line) + ": " + what);
}

std::string coords(const std::array<int, 3>& p) {
  return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

}  // namespace

void Formula1in3::validate() const {
  if (variables < 1) throw Error(ErrorCode::MalformedFormula, "formula needs at least one variable");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    for (int lit : clauses[c]) {
      if (lit == 0 || lit > variables || lit < -variables) {
        throw Error(ErrorCode::MalformedFormula,
                    "clause " + std::to_string(c + 1) + " has literal " + std::to_string(lit) + " out of range");
      }
    }
  }
}

bool Formula1in3::satisfied_by(const std::vector<bool>& assignment) const {
  if (assignment.size() != static_cast<std::size_t>(variables)) return false;
  for (const auto& clause : clauses) {
    int true_count = 0;
    for (int lit : clause) {
      bool v = assignment[std::abs(lit) - 1];
      true_count += (lit > 0) == v;
    }
    if (true_count != 1) return false;
  }
  return true;
}

Formula1in3 parse_formula(std::string_view text) {
  Formula1in3 phi;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  long declared = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == 'c') continue;
    if (head == "p") {
      std::string kind;
      long vars = 0;
      if (declared >= 0) throw malformed(line_no, "second header");
      if (!(ls >> kind >> vars >> declared) || kind != "1in3" || vars < 1 || declared < 0) {
        throw malformed(line_no, "expected 'p 1in3 <vars> <clauses>'");
      }
      phi.variables = static_cast<int>(vars);
      continue;
    }
    if (declared < 0) throw malformed(line_no, "clause before header");
    std::vector<long> lits;
    ls.clear();
    ls.seekg(0);
    long v = 0;
    while (ls >> v) lits.push_back(v);
    if (!ls.eof()) throw malformed(line_no, "non-integer token");
    if (lits.size() == 4 && lits.back() == 0) lits.pop_back();
    if (lits.size() != 3) throw malformed(line_no, "a clause has exactly three literals");
    for (long lit : lits) {
      if (lit == 0 || lit > phi.variables || lit < -phi.variables) throw malformed(line_no, "literal out of range");
    }
    phi.clauses.push_back({static_cast<int>(lits[0]), static_cast<int>(lits[1]), static_cast<int>(lits[2])});
  }
  if (declared < 0) throw Error(ErrorCode::MalformedFormula, "missing 'p 1in3' header");
  if (static_cast<long>(phi.clauses.size()) != declared) {
    throw Error(ErrorCode::MalformedFormula, "header declares " + std::to_string(declared) + " clauses, found " +
                                                 std::to_string(phi.clauses.size()));
  }
  return phi;
}

std::string format_formula(const Formula1in3& phi) {
  std::ostringstream out;
  out << "p 1in3 " << phi.variables << ' ' << phi.clauses.size() << '\n';
  for (const auto& c : phi.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  return out.str();
}

Instance gen_fig5_pair() {
  ProfileSpace sp(2, 2);
  std::vector<Rational> rho(8, Rational(1));
  rho[4 + sp.index({1, 2})] = make_rational(2, 5);
  rho[sp.index({2, 1})] = make_rational(1, 2);
  return values_from_ratios(Ratios(2, 2, rho), Mode::Good);
}

// ---------------------------------------------------------------------------
// Hardness reduction.
//
// A cycle on the box [a, b] has three corners
//   P = (a1, a2, b3) with rho3 = rho4 = eps
//   Q = (b1, a2, a3) with rho1 = rho4 = eps
//   R = (a1, b2, a3) with rho2 = rho4 = eps
// and two states. True: agent 1 from P along s1, agent 2 from Q along s2, agent 3
// from R along s3. False: agent 2 from P along s2, agent 3 from Q along s3, agent 1
// from R along s1. Agent 1 then occupies line (a2, b3) or line (b2, a3).

int hardness_signals(const Formula1in3& phi) {
  const int m = static_cast<int>(phi.clauses.size());
  return std::max({6 * m + 6, 2 * phi.variables + 5 * m, 4});
}

Rational default_hardness_epsilon(const Rational& beta) { return Rational(1 / (2 * beta)); }

Rational sos_hardness_epsilon(int n, int k) { return Rational((sos_threshold(n, k) + 1) / 2); }

namespace {

struct Corner {
  std::array<int, 3> at;
  int agent;  // agent painted from this corner
  int axis;   // direction of the ray
};

// Corners P, Q, R with their true-state and false-state rays.
std::array<Corner, 3> rays(const GadgetCycle& c, bool state) {
  std::array<int, 3> p{c.a[0], c.a[1], c.b[2]};
  std::array<int, 3> q{c.b[0], c.a[1], c.a[2]};
  std::array<int, 3> r{c.a[0], c.b[1], c.a[2]};
  if (state) return {Corner{p, 0, 0}, Corner{q, 1, 1}, Corner{r, 2, 2}};
  return {Corner{p, 1, 1}, Corner{q, 2, 2}, Corner{r, 0, 0}};
}

}  // namespace

HardnessInstance gen_hardness(const Formula1in3& phi, const Rational& epsilon, const Rational& beta) {
  phi.validate();
  if (beta <= 1) throw Error(ErrorCode::PreconditionViolation, "beta must exceed 1");
  if (sgn(epsilon) <= 0 || epsilon * beta >= 1) {
    throw Error(ErrorCode::PreconditionViolation, "epsilon must lie in (0, 1/beta)");
  }
  HardnessInstance h;
  h.formula = phi;
  h.epsilon = epsilon;
  const int k = h.k = hardness_signals(phi);
  const int m = static_cast<int>(phi.clauses.size());
  const int V = phi.variables;
  // Planes: 1 and k variables; 2 and 3 the low corners of literals 1 and 2;
  // connectors of literals 1 and 2 below the centers' plane c1, of literal 3 above.
  const int c1 = 4 * m + 4;
  const int top = c1 + 2 * m + 1;

  struct Lines {
    std::array<int, 2> pos, neg;
  };
  std::vector<Lines> var_lines(V);
  for (int j = 0; j < V; ++j) {
    int p = 1 + 2 * j, q = 5 * m + 1 + 2 * j;
    GadgetCycle g;
    g.role = GadgetCycle::Role::Variable;
    g.label = "variable " + std::to_string(j + 1);
    g.a = {1, p, q};
    g.b = {k, p + 1, q + 1};
    g.variable = j;
    g.state_when_true = true;
    h.cycles.push_back(g);
    var_lines[j] = {{p, q + 1}, {p + 1, q}};
  }

  // Literal r reaches the center with agent r: the same cycle rotated r times
  // through (s1, s2, s3). Offsets of a and b from the center.
  const std::array<std::array<int, 3>, 3> lo_off{{{2 - c1, 0, -1}, {3 - c1, -2, 0}, {0, -1, -2}}};
  const std::array<std::array<int, 3>, 3> hi_off{{{top - c1, 1, 0}, {0, 2, 1}, {top - c1, 0, 2}}};
  int below = 4, above = c1 + 1;
  for (int i = 0; i < m; ++i) {
    const std::array<int, 3> c{c1, 2 * V + 3 + 5 * i, 3 + 5 * i};
    h.centers.push_back(c);
    for (int r = 0; r < 3; ++r) {
      int lit = phi.clauses[i][r];
      GadgetCycle g;
      g.role = GadgetCycle::Role::Clause;
      g.label = "clause " + std::to_string(i + 1) + " literal " + std::to_string(r + 1);
      for (int d = 0; d < 3; ++d) {
        g.a[d] = c[d] + lo_off[r][d];
        g.b[d] = c[d] + hi_off[r][d];
      }
      g.variable = std::abs(lit) - 1;
      g.state_when_true = lit > 0;
      h.cycles.push_back(g);

      // U is the literal's line with coordinates no other line uses: the false
      // line for r = 0, the true line otherwise.
      const bool unique_active_when_lit = r > 0;
      const std::array<int, 2> U = r == 0 ? std::array<int, 2>{g.b[1], g.a[2]} : std::array<int, 2>{g.a[1], g.b[2]};
      // The connector's true line W is a variable line active exactly when U is inactive.
      bool want_active_when_var_true = (lit > 0) != unique_active_when_lit;
      const auto& lines = var_lines[g.variable];
      auto W = want_active_when_var_true ? lines.pos : lines.neg;
      GadgetCycle x;
      x.role = GadgetCycle::Role::Connector;
      x.label = "connector clause " + std::to_string(i + 1) + " literal " + std::to_string(r + 1) + " to variable " +
                std::to_string(g.variable + 1);
      int& next = r < 2 ? below : above;
      const int height = next;
      next += 2;
      x.a = {height, W[0], U[1]};
      x.b = {height + 1, U[0], W[1]};
      x.variable = g.variable;
      x.state_when_true = want_active_when_var_true;
      h.cycles.push_back(x);
    }
  }

  ProfileSpace cube(3, k);
  std::vector<std::array<bool, 4>> low(cube.size(), {false, false, false, false});
  auto mark = [&](const std::array<int, 3>& s, std::initializer_list<int> agents) {
    auto& cell = low[cube.index({s[0], s[1], s[2]})];
    for (int a : agents) cell[a] = true;
  };
  for (const auto& g : h.cycles) {
    mark({g.a[0], g.a[1], g.b[2]}, {2, 3});
    mark({g.b[0], g.a[1], g.a[2]}, {0, 3});
    mark({g.a[0], g.b[1], g.a[2]}, {1, 3});
  }
  for (const auto& c : h.centers) mark(c, {3});

  ProfileSpace sp(4, k);
  std::vector<Rational> rho(4 * sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    std::size_t c = idx % cube.size();
    for (int i = 0; i < 4; ++i) rho[i * sp.size() + idx] = low[c][i] ? epsilon : Rational(1);
  }
  h.rho = Ratios(4, k, std::move(rho));
  return h;
}

AllocationRule HardnessInstance::witness(const std::vector<bool>& assignment) const {
  if (!formula.satisfied_by(assignment)) {
    throw Error(ErrorCode::PreconditionViolation, "assignment does not satisfy the formula 1-in-3");
  }
  ProfileSpace cube(3, k);
  std::vector<int> paint(cube.size(), -1);
  for (const auto& g : cycles) {
    bool state = assignment[g.variable] == g.state_when_true;
    for (const auto& corner : rays(g, state)) {
      auto s = corner.at;
      for (int t = s[corner.axis]; t <= k; ++t) {
        s[corner.axis] = t;
        int& cell = paint[cube.index({s[0], s[1], s[2]})];
        if (cell >= 0 && cell != corner.agent) {
          throw Error(ErrorCode::PreconditionViolation, "gadget rays collide at " + coords(s) + " (" + g.label + ")");
        }
        cell = corner.agent;
      }
    }
  }
  ProfileSpace sp(4, k);
  std::vector<int> winner(sp.size());
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    int p = paint[idx % cube.size()];
    winner[idx] = p < 0 ? 3 : p;
  }
  return AllocationRule::deterministic(4, k, winner);
}

std::vector<std::string> HardnessInstance::mapping() const {
  std::vector<std::string> out;
  for (const auto& g : cycles) out.push_back(g.label + ": a=" + coords(g.a) + " b=" + coords(g.b));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    out.push_back("clause " + std::to_string(i + 1) + " center: " + coords(centers[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Query adversary.

namespace {

Ratios query_base(const ProfileSpace& sp, const Profile& focal, const Rational& eps) {
  const int n = sp.n();
  std::vector<Rational> rho(n * sp.size(), eps);
  auto set = [&](int agent, std::size_t idx) { rho[agent * sp.size() + idx] = 1; };
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    auto s = sp.decode(idx);
    if (n == 2) {
      set(0, idx);
      set(1, idx);
      continue;
    }
    int J = -1;
    for (int j = n - 1; j >= 2 && J < 0; --j)
      if (s[j] != focal[j]) J = j;
    if (J < 0) {
      if (s[0] >= focal[0]) set(1, idx);
      if (s[1] >= focal[1]) set(0, idx);
      if (s[0] < focal[0] || s[1] < focal[1]) set(2, idx);
    } else {
      set(J, idx);
      if (J + 1 < n) set(J + 1, idx);
    }
  }
  return Ratios(n, sp.k(), std::move(rho));
}

// Unit propagation of rho = 1 selection and monotone (increasing) lines.
class Closure {
 public:
  explicit Closure(const Ratios& rho) : rho_(rho), sp_(rho.space()), val_(sp_.n() * sp_.size(), -1) {
    for (std::size_t idx = 0; idx < sp_.size(); ++idx)
      for (int i = 0; i < sp_.n(); ++i)
        if (rho_.at(i, idx) < 1) assign(i, idx, 0);
    run();
  }

  bool pin(int agent, std::size_t idx) {
    assign(agent, idx, 1);
    return run();
  }

  int value(int agent, std::size_t idx) const { return val_[agent * sp_.size() + idx]; }

 private:
  void assign(int agent, std::size_t idx, int v) {
    int& cell = val_[agent * sp_.size() + idx];
    if (cell == v) return;
    if (cell >= 0) {
      conflict_ = true;
      return;
    }
    cell = v;
    queue_.emplace_back(agent, idx);
  }

  bool run() {
    while (!queue_.empty() && !conflict_) {
      auto [i, idx] = queue_.front();
      queue_.pop_front();
      int v = value(i, idx);
      int own = sp_.signal(idx, i);
      if (v == 1) {
        for (int t = own + 1; t <= sp_.k(); ++t) assign(i, sp_.with_signal(idx, i, t), 1);
        for (int j = 0; j < sp_.n(); ++j)
          if (j != i) assign(j, idx, 0);
      } else {
        for (int t = 1; t < own; ++t) assign(i, sp_.with_signal(idx, i, t), 0);
        int open = -1, count = 0;
        bool selected = false;
        for (int j = 0; j < sp_.n(); ++j) {
          selected = selected || value(j, idx) == 1;
          if (value(j, idx) < 0) open = j, ++count;
        }
        if (selected) continue;
        if (count == 0) conflict_ = true;
        if (count == 1) assign(open, idx, 1);
      }
    }
    return !conflict_;
  }

  const Ratios& rho_;
  const ProfileSpace& sp_;
  std::vector<int> val_;
  std::deque<std::pair<int, std::size_t>> queue_;
  bool conflict_ = false;
};

// Literals x_j(s) = 1 implied by pinning x_agent(focal) = 1, at profiles with two acceptable agents.
std::vector<Literal> implied(const Ratios& rho, int agent, std::size_t focal) {
  const auto& sp = rho.space();
  Closure base(rho);
  Closure pinned(rho);
  if (!pinned.pin(agent, focal)) throw Error(ErrorCode::NotFeasible, "focal pin is inconsistent with the base");
  std::vector<Literal> out;
  for (std::size_t idx = 0; idx < sp.size(); ++idx) {
    if (idx == focal) continue;
    int acceptable = 0;
    for (int j = 0; j < sp.n(); ++j) acceptable += rho.at(j, idx) == 1;
    if (acceptable < 2) continue;
    for (int j = 0; j < sp.n(); ++j) {
      if (pinned.value(j, idx) == 1 && base.value(j, idx) != 1) out.push_back({j, idx});
    }
  }
  return out;
}

}  // namespace

QueryAdversary gen_query_adversary(int n, int k, PlantKind planted, std::size_t index, const Rational& epsilon) {
  if (n < 2 || k < 2) throw Error(ErrorCode::PreconditionViolation, "query adversary needs n >= 2 and k >= 2");
  if (sgn(epsilon) <= 0 || epsilon >= 1) throw Error(ErrorCode::PreconditionViolation, "epsilon must lie in (0, 1)");
  ProfileSpace sp(n, k);
  QueryAdversary q;
  q.focal.assign(n, 1);
  q.focal[0] = q.focal[1] = 1 + k / 2;
  for (int i = 2; i < n; ++i) q.focal[i] = i % 2 == 0 ? 1 : k;
  q.focal_index = sp.index(q.focal);
  Ratios base = query_base(sp, q.focal, epsilon);
  // Planting against agent 2's consequences leaves agent 1 as the only option, and vice versa.
  q.l1 = implied(base, 1, q.focal_index);
  q.l2 = implied(base, 0, q.focal_index);
  if (planted == PlantKind::None) {
    q.rho = std::move(base);
    return q;
  }
  const auto& set = planted == PlantKind::L1 ? q.l1 : q.l2;
  if (index >= set.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "plant index " + std::to_string(index) + " outside a set of " + std::to_string(set.size()));
  }
  auto table = base.table();
  table[set[index].agent * sp.size() + set[index].profile] = epsilon;
  q.rho = Ratios(n, k, std::move(table));
  return q;
}

// ---------------------------------------------------------------------------

AllocationRule find_fractional_vertex(int trials, std::uint64_t seed, int n, int k) {
  ProfileSpace sp(n, k);
  std::vector<Rational> values(n * sp.size());
  for (int i = 0; i < n; ++i)
    for (std::size_t idx = 0; idx < sp.size(); ++idx) values[i * sp.size() + idx] = sp.signal(idx, i);
  auto ord = orderings_from_instance(Instance(n, k, Mode::Good, values));
  RationalLP lp = truthful_polytope(ord);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-100, 100);
  for (int t = 0; t < trials; ++t) {
    lp.objective.clear();
    for (std::size_t v = 0; v < lp.num_vars; ++v) {
      int c = coeff(rng);
      if (c != 0) lp.objective.emplace_back(v, Rational(c));
    }
    auto sol = simplex_solve(lp);
    if (sol.status != LPStatus::Optimal) continue;
    bool fractional = std::any_of(sol.point.begin(), sol.point.end(),
                                  [](const Rational& x) { return x.get_den() != 1; });
    if (fractional && verify_vertex(lp, sol.point)) return allocation_from_point(sp, sol.point);
  }
  throw Error(ErrorCode::NotFound, "no fractional vertex in " + std::to_string(trials) + " trials");
}

Instance gen_random(int n, int k, Mode mode, std::uint64_t seed, double tie_prob) {
  if (n < 1 || k < 1) throw Error(ErrorCode::PreconditionViolation, "n and k must be positive");
  ProfileSpace sp(n, k);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(1, std::max(40L, 4L * k));
  std::uniform_int_distribution<long> den(1, 4);
  std::bernoulli_distribution tie(tie_prob);
  std::vector<Rational> t(n * sp.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t base : sp.line_bases(i)) {
      std::vector<Rational> line;
      for (int s = 1; s <= k; ++s) {
        Rational v;
        if (s > 1 && tie(rng)) {
          v = line.back();
        } else {
          do {
            long p = num(rng);
            v = make_rational(p, den(rng));
          } while (std::find(line.begin(), line.end(), v) != line.end());
        }
        line.push_back(v);
        t[i * sp.size() + sp.with_signal(base, i, s)] = v;
      }
    }
  }
  return Instance(n, k, mode, std::move(t));
}

}  // namespace ivmech
