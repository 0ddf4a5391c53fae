#pragma once

#include "ivmech/model.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ivmech {

// Literals are signed 1-based variable indices.
struct Formula1in3 {
  int variables = 0;
  std::vector<std::array<int, 3>> clauses;

  // Throws Error(MalformedFormula) on a zero or out-of-range literal.
  void validate() const;
  // Exactly one true literal per clause.
  bool satisfied_by(const std::vector<bool>& assignment) const;
};

Formula1in3 parse_formula(std::string_view text);
std::string format_formula(const Formula1in3& phi);

// n = 2, k = 2 increasing values with R_V*, R_C*, R_D* = 11/8, 8/5, 2.
Instance gen_fig5_pair();

// One 3-cycle of the reduction in the (s1, s2, s3) box [a, b]; s4 is free.
struct GadgetCycle {
  enum class Role { Variable, Clause, Connector };
  Role role = Role::Variable;
  std::string label;
  std::array<int, 3> a{};
  std::array<int, 3> b{};
  // Which state the cycle takes, read off the assignment.
  int variable = 0;  // 0-based
  bool state_when_true = true;
};

struct HardnessInstance {
  Formula1in3 formula;
  int k = 0;
  Rational epsilon;
  Ratios rho;
  std::vector<GadgetCycle> cycles;
  std::vector<std::array<int, 3>> centers;  // one per clause

  // Ratio-1 deterministic rule for a satisfying assignment; PreconditionViolation otherwise.
  AllocationRule witness(const std::vector<bool>& assignment) const;
  // Lines of the form "label: a=(..) b=(..)"; the formula-to-coordinate map.
  std::vector<std::string> mapping() const;
};

int hardness_signals(const Formula1in3& phi);
Rational default_hardness_epsilon(const Rational& beta);
// Midpoint of the range accepted by sos_values_from_ratios.
Rational sos_hardness_epsilon(int n, int k);

// Requires beta > 1 and 0 < epsilon < 1/beta.
HardnessInstance gen_hardness(const Formula1in3& phi, const Rational& epsilon, const Rational& beta);

enum class PlantKind { None, L1, L2 };

struct Literal {
  int agent = 0;
  std::size_t profile = 0;
};

struct QueryAdversary {
  Ratios rho;
  Profile focal;
  std::size_t focal_index = 0;
  // Planting any entry of l1 forces agent 1 at the focal profile; l2 forces agent 2.
  std::vector<Literal> l1;
  std::vector<Literal> l2;
};

QueryAdversary gen_query_adversary(int n, int k, PlantKind planted = PlantKind::None, std::size_t index = 0,
                                   const Rational& epsilon = Rational(1, 2));

// Simplex with random objectives over T(sigma) of n agents, k signals, strict orders.
// Throws Error(NotFound) when no fractional vertex shows up within the budget.
AllocationRule find_fractional_vertex(int trials, std::uint64_t seed, int n = 3, int k = 3);

Instance gen_random(int n, int k, Mode mode, std::uint64_t seed, double tie_prob = 0.2);

}  // namespace ivmech
