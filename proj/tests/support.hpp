#pragma once

// Random inputs for property tests.

#include <random>
#include <set>
#include <vector>

#include "hardgi/formula.hpp"
#include "hardgi/graph.hpp"

namespace support {

using namespace hardgi;

inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng, std::size_t colors = 1) {
  Graph g(n);
  std::bernoulli_distribution edge(p);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (edge(rng)) g.add_edge(u, v);
    }
  }
  if (colors > 1) {
    std::uniform_int_distribution<Color> c(0, static_cast<Color>(colors - 1));
    std::vector<Color> col(n);
    for (auto& x : col) x = c(rng);
    g.set_colors(col);
  }
  return g;
}

/// m distinct random triples on n variables; each rhs is 1 with probability p_rhs.
inline XorFormula random_formula(std::size_t n, std::size_t m, std::mt19937_64& rng, double p_rhs = 0.0) {
  if (n < 3 || m > n * (n - 1) * (n - 2) / 6) throw std::invalid_argument("random_formula: too many clauses");
  std::uniform_int_distribution<Var> var(1, static_cast<Var>(n));
  std::bernoulli_distribution rhs(p_rhs);
  std::set<std::array<Var, 3>> seen;
  std::vector<RawXorClause> raw;
  while (raw.size() < m) {
    std::array<Var, 3> t{var(rng), var(rng), var(rng)};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2] || !seen.insert(t).second) continue;
    raw.push_back({t, rhs(rng)});
  }
  return make_formula(n, raw, Contradictions::reject);
}

}  // namespace support
