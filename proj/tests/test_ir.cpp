#include <random>

#include "catch_amalgamated.hpp"
#include "hardgi/canon/brute.hpp"
#include "hardgi/canon/ir.hpp"
#include "hardgi/cfi.hpp"
#include "hardgi/gf2.hpp"
#include "hardgi/sampler.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hardgi;

namespace {

Graph complete(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

Graph petersen() {
  Graph g(10);
  for (Vertex i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(i + 5, (i + 2) % 5 + 5);
  }
  return g;
}

std::vector<std::size_t> orbit_labels(std::size_t n, const std::vector<Permutation>& group) {
  std::vector<std::size_t> label(n);
  for (std::size_t v = 0; v < n; ++v) {
    label[v] = v;
    for (const auto& p : group) label[v] = std::min<std::size_t>(label[v], p[v]);
  }
  return label;
}

const CellSelector kSelectors[] = {CellSelector::first_smallest, CellSelector::first_largest, CellSelector::first};

}  // namespace

TEST_CASE("known group orders") {
  CHECK(ir_automorphisms(complete(4)).group_size == 24);
  CHECK(ir_automorphisms(complete(9)).group_size == 362880);
  Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  CHECK(ir_automorphisms(p3).group_size == 2);
  CHECK(ir_automorphisms(Graph(5)).group_size == 120);
  CHECK(ir_automorphisms(petersen()).group_size == 120);
  CHECK(brute_force_automorphisms(petersen()).group_size == 120);
  CHECK(ir_automorphisms(Graph(0)).group_size == 1);
}

TEST_CASE("group orders beyond 64 bits") {
  // 30 isolated vertices: 30! exceeds 2^64
  BigCount fact = 1;
  for (int i = 2; i <= 30; ++i) fact *= i;
  CHECK(ir_automorphisms(Graph(30)).group_size == fact);
}

TEST_CASE("IR search agrees with exhaustive enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Graph g = support::random_graph(n, 0.2 + 0.15 * (trial % 4), rng, 1 + trial % 2);
    const auto all = oracle::all_automorphisms(g);
    const auto expected_orbits = orbit_labels(n, all);
    for (CellSelector s : kSelectors) {
      const AutReport r = ir_automorphisms(g, {}, s);
      CHECK(r.status == SearchStatus::complete);
      CHECK(r.group_size == all.size());
      for (const auto& p : r.generators) CHECK(is_automorphism(g, p));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          CHECK(r.orbit_partition.same_cell(a, b) == (expected_orbits[a] == expected_orbits[b]));
        }
      }
    }
    const AutReport b = brute_force_automorphisms(g);
    CHECK(b.group_size == all.size());
  }
}

TEST_CASE("brute force refuses large graphs") {
  CHECK_THROWS_AS(brute_force_automorphisms(Graph(11)), std::invalid_argument);
}

TEST_CASE("node budget stops the search") {
  SearchBudget b;
  b.max_nodes = 2;
  const AutReport r = ir_automorphisms(petersen(), b);
  CHECK(r.status == SearchStatus::timeout);
  CHECK(r.search_nodes <= 2);
}

TEST_CASE("gadget graphs: the group contains every companion solution") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + trial % 6;
    const XorFormula f = support::random_formula(n, n - 2 + trial % 4, rng, 0.5);
    const std::uint64_t sols = oracle::count_solutions(homogeneous_companion(f));
    for (GadgetMode mode : {GadgetMode::core, GadgetMode::full}) {
      const AutReport r = ir_automorphisms(build_graph(f, mode));
      REQUIRE(r.status == SearchStatus::complete);
      CHECK(r.group_size % sols == 0);
      for (const auto& p : r.generators) CHECK(is_automorphism(build_graph(f, mode), p));
    }
  }
}

TEST_CASE("small named graphs by brute force") {
  Graph edge(2);
  edge.add_edge(0, 1);
  CHECK(brute_force_automorphisms(edge).group_size == 2);
  CHECK(brute_force_automorphisms(complete(3)).group_size == 6);
  CHECK(ir_automorphisms(complete(4)).orbit_partition.cell_count() == 1);
}

TEST_CASE("full gadget group order is 2^(kernel dimension)") {
  const XorFormula triples = make_formula(4, {{{1, 2, 3}, false}, {{1, 2, 4}, false}, {{1, 3, 4}, false}, {{2, 3, 4}, false}});
  CHECK(ir_automorphisms(build_full(triples)).group_size == 1);
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + trial % 5;
    const std::size_t m = std::min<std::size_t>(n + trial % (n + 1), choose3(n));
    const XorFormula f = support::random_formula(n, m, rng);
    const AutReport r = ir_automorphisms(build_full(f));
    REQUIRE(r.status == SearchStatus::complete);
    CHECK(r.group_size == oracle::count_solutions(f));
  }
}
