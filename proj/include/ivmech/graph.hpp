#pragma once

#include <cstddef>
#include <vector>

namespace ivmech {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccResult {
  std::size_t count = 0;
  // Component of each vertex, numbered in topological order of the condensation.
  std::vector<std::size_t> component;
};

// Iterative Tarjan; linear in vertices plus edges.
SccResult strongly_connected_components(const Adjacency& adj);

// Vertices reachable from `from` (including itself).
std::vector<bool> reachable_from(const Adjacency& adj, std::size_t from);

}  // namespace ivmech
