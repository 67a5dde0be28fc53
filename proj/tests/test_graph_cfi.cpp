#include <random>

#include "catch_amalgamated.hpp"
#include "hardgi/cfi.hpp"
#include "hardgi/gf2.hpp"
#include "hardgi/sampler.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hardgi;

namespace {

XorFormula complete_triples_4() {
  return make_formula(4, {{{1, 2, 3}, false}, {{1, 2, 4}, false}, {{1, 3, 4}, false}, {{2, 3, 4}, false}});
}

}  // namespace

TEST_CASE("graph basics") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 1);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(1, 2));
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK_THROWS(g.add_edge(1, 1));
  CHECK_THROWS(g.add_edge(0, 4));
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(is_automorphism(g, {2, 1, 0, 3}));
  CHECK_FALSE(is_automorphism(g, {1, 0, 2, 3}));
  CHECK_FALSE(is_automorphism(g, {0, 0, 2, 3}));
}

TEST_CASE("vertex numbering") {
  const VertexScheme vs(4, 4);
  CHECK(vs.variable(1, false) == 0);
  CHECK(vs.variable(4, true) == 7);
  CHECK(vs.clause(1, 0) == 8);
  CHECK(vs.clause(4, 3) == 23);
  CHECK(vs.order_left(1) == 24);
  CHECK(vs.order_stem(3) == 32);
  CHECK(vs.full_vertices() == 33);
  CHECK(vs.full_edges() == 70);
  CHECK(vs.core_vertices() == 24);
  CHECK(vs.core_edges() == 52);
}

TEST_CASE("complete triples on four variables") {
  const XorFormula f = complete_triples_4();
  const Graph full = build_full(f);
  CHECK(full.vertex_count() == 33);
  CHECK(full.edge_count() == 70);
  // clause {1,2,3}, tag 011 negates x2 and x3
  CHECK(full.adjacent(9, 1));
  CHECK(full.adjacent(9, 2));
  CHECK(full.adjacent(9, 4));
  // order gadget for i = 1
  CHECK(full.adjacent(24, 25));
  CHECK(full.adjacent(25, 26));
  CHECK(full.degree(26) == 1);
}

TEST_CASE("size formulas and degrees hold on random formulas") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 20;
    const std::size_t m = 1 + trial % std::min<std::size_t>(3 * n, choose3(n));
    const XorFormula f = support::random_formula(n, m, rng, trial % 2 ? 0.5 : 0.0);
    const VertexScheme vs(n, f.num_clauses());
    std::vector<std::size_t> occ(n + 1, 0);
    for (const auto& c : f.clauses()) {
      for (auto v : c.vars) ++occ[v];
    }
    for (GadgetMode mode : {GadgetMode::core, GadgetMode::full}) {
      const Graph g = build_graph(f, mode);
      CHECK(g.vertex_count() == vs.expected_vertices(mode));
      CHECK(g.edge_count() == vs.expected_edges(mode));
      for (Var j = 1; j <= n; ++j) {
        const std::size_t order = mode == GadgetMode::core ? 0 : (j == 1 || j == n ? 1 : 2);
        CHECK(g.degree(vs.variable(j, false)) == 1 + 2 * occ[j] + order);
        CHECK(g.degree(vs.variable(j, true)) == 1 + 2 * occ[j] + order);
      }
      for (std::size_t c = 1; c <= f.num_clauses(); ++c) {
        for (std::size_t t = 0; t < 4; ++t) CHECK(g.degree(vs.clause(c, t)) == 3);
      }
    }
  }
}

TEST_CASE("solutions of the homogeneous companion act as automorphisms") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + trial % 7;
    const XorFormula f = support::random_formula(n, 1 + trial % n, rng, 0.5);
    const XorFormula h = homogeneous_companion(f);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      const Gf2Vector a = oracle::assignment_from_bits(n, bits);
      for (GadgetMode mode : {GadgetMode::core, GadgetMode::full}) {
        const Graph g = build_graph(f, mode);
        if (h.satisfied_by(a)) {
          CHECK(is_automorphism(g, assignment_automorphism(f, a, mode)));
        } else {
          CHECK_THROWS_AS(assignment_automorphism(f, a, mode), std::invalid_argument);
        }
      }
    }
  }
}

TEST_CASE("incidence graph") {
  const Graph g = incidence_graph(complete_triples_4());
  CHECK(g.vertex_count() == 8);
  CHECK(g.edge_count() == 12);
  CHECK(g.color(0) == 0);
  CHECK(g.color(4) == 1);
  CHECK(g.adjacent(0, 4));
  CHECK_FALSE(g.adjacent(3, 4));
  CHECK_THROWS(incidence_graph(make_formula(3, {{{1, 2, 3}, true}})));
}

TEST_CASE("full gadget needs two variables") {
  CHECK_THROWS_AS(build_full(make_formula(1, {})), std::invalid_argument);
}
