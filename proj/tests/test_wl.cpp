#include <random>

#include "catch_amalgamated.hpp"
#include "hardgi/canon/ir.hpp"
#include "hardgi/canon/wl.hpp"
#include "support.hpp"

using namespace hardgi;

namespace {

// C6 on 0..5 beside two triangles on 6..11
Graph hexagon_and_triangles() {
  Graph g(12);
  for (Vertex v = 0; v < 6; ++v) g.add_edge(v, (v + 1) % 6);
  for (Vertex b : {6u, 9u}) {
    g.add_edge(b, b + 1);
    g.add_edge(b + 1, b + 2);
    g.add_edge(b, b + 2);
  }
  return g;
}

}  // namespace

TEST_CASE("2-WL sees triangles that colour refinement misses") {
  const Graph g = hexagon_and_triangles();
  CHECK(wl_indistinguishable(g, 0, 6, 1));
  CHECK_FALSE(wl_indistinguishable(g, 0, 6, 2));
  CHECK(wl_indistinguishable(g, 6, 10, 2));
  CHECK(wl_indistinguishable(g, 0, 3, 3));
}

TEST_CASE("k-WL refines colour refinement and respects orbits") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const Graph g = support::random_graph(n, 0.3 + 0.1 * (trial % 3), rng, 1 + trial % 2);
    const Partition cr = color_refine(g);
    const AutReport aut = ir_automorphisms(g);
    for (std::size_t k = 2; k <= 3; ++k) {
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
          const bool same = wl_indistinguishable(g, u, v, k);
          if (same) CHECK(cr.same_cell(u, v));
          if (aut.orbit_partition.same_cell(u, v)) CHECK(same);
          if (same && k == 3) CHECK(wl_indistinguishable(g, u, v, 2));
        }
      }
    }
  }
}

TEST_CASE("k-WL arguments") {
  const Graph g = hexagon_and_triangles();
  CHECK_THROWS(wl_k(g, 1));
  CHECK_THROWS(wl_k(g, 5));
  CHECK_THROWS_AS(wl_k(Graph(400), 4), std::length_error);
  CHECK_THROWS(wl_indistinguishable(g, 0, 12, 2));
  CHECK(wl_k(g, 2).element_count() == 144);
}

TEST_CASE("trivial cases") {
  const Graph g = hexagon_and_triangles();
  CHECK(wl_indistinguishable(g, 4, 4, 2));
  Graph star(4);
  for (Vertex v = 1; v < 4; ++v) star.add_edge(0, v);
  for (std::size_t k = 1; k <= 3; ++k) CHECK_FALSE(wl_indistinguishable(star, 0, 1, k));
}

TEST_CASE("2-WL on C6 classifies pairs by distance") {
  Graph c6(6);
  for (Vertex v = 0; v < 6; ++v) c6.add_edge(v, (v + 1) % 6);
  const Partition p = wl_k(c6, 2);
  CHECK(p.cell_count() == 4);
  auto dist = [](Vertex a, Vertex b) { return std::min((a + 6 - b) % 6, (b + 6 - a) % 6); };
  for (Vertex a = 0; a < 6; ++a) {
    for (Vertex b = 0; b < 6; ++b) {
      for (Vertex c = 0; c < 6; ++c) {
        for (Vertex d = 0; d < 6; ++d) CHECK(p.same_cell(6 * a + b, 6 * c + d) == (dist(a, b) == dist(c, d)));
      }
    }
  }
}
