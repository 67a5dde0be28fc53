#pragma once

#include <stdexcept>
#include <vector>

#include "hardgi/canon/ir.hpp"
#include "hardgi/graph.hpp"

namespace hardgi {

inline constexpr std::size_t kBruteForceMaxVertices = 10;

/// Exact automorphism group by enumerating every permutation consistent with colours and
/// adjacency. Generators are the automorphisms that merged two orbits when found.
inline AutReport brute_force_automorphisms(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kBruteForceMaxVertices) {
    throw std::invalid_argument("brute_force_automorphisms: more than " + std::to_string(kBruteForceMaxVertices) +
                                " vertices");
  }
  AutReport report;
  report.group_size = 0;
  UnionFind orbits(n);
  Permutation image(n);
  std::vector<bool> used(n, false);
  auto extend = [&](auto&& self, Vertex v) -> void {
    ++report.search_nodes;
    if (v == n) {
      report.group_size += 1;
      bool merges = false;
      for (Vertex x = 0; x < n; ++x) merges = orbits.unite(x, image[x]) || merges;
      if (merges) report.generators.push_back(image);
      return;
    }
    for (Vertex c = 0; c < n; ++c) {
      if (used[c] || g.color(c) != g.color(v) || g.degree(c) != g.degree(v)) continue;
      bool ok = true;
      for (Vertex u = 0; u < v && ok; ++u) ok = g.adjacent(u, v) == g.adjacent(image[u], c);
      if (!ok) continue;
      used[c] = true;
      image[v] = c;
      self(self, v + 1);
      used[c] = false;
    }
  };
  extend(extend, 0);
  report.orbit_partition = orbits.to_partition();
  return report;
}

}  // namespace hardgi
