#pragma once

#include "ivmech/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ivmech {

enum class Target { Value, Cost, Det };
enum class SolvePath { Duo, Binary, Lp, Oracle, Propagation };

const char* target_name(Target target);
const char* path_name(SolvePath path);

struct ConflictPair {
  std::size_t source = 0;
  std::size_t sink = 0;
  Target kind = Target::Det;
  Rational bound;
};

struct MatchingCertificate {
  Rational gamma;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> must_match;
};

struct LpCertificate {
  std::vector<Rational> point;
  std::vector<std::size_t> basis;
  Rational objective;
};

using Certificate = std::variant<std::monostate, ConflictPair, MatchingCertificate, LpCertificate>;

struct SolveReport {
  Target target = Target::Value;
  SolvePath path = SolvePath::Lp;
  Rational ratio;
  AllocationRule allocation;
  Certificate certificate;
  double wall_ms = 0.0;
};

}  // namespace ivmech
