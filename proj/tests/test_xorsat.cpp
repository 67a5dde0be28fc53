#include <random>

#include "catch_amalgamated.hpp"
#include "hardgi/xorsat.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hardgi;

namespace {

SatInstance random_instance(std::size_t n, std::mt19937_64& rng) {
  SatInstance s;
  s.num_vars = n;
  std::uniform_int_distribution<int> var(1, static_cast<int>(n));
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> count(0, static_cast<int>(n));
  const int cl = count(rng), xs = count(rng);
  for (int i = 0; i < cl; ++i) {
    std::vector<Lit> c;
    for (int j = 0; j < 3; ++j) c.push_back(coin(rng) ? var(rng) : -var(rng));
    s.clauses.push_back(c);
  }
  for (int i = 0; i < xs; ++i) {
    std::set<Var> vs;
    for (int j = 0; j < 3; ++j) vs.insert(static_cast<Var>(var(rng)));
    s.xors.push_back({std::vector<Var>(vs.begin(), vs.end()), coin(rng)});
  }
  return s;
}

}  // namespace

TEST_CASE("both solver modes agree with brute force") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const SatInstance s = random_instance(n, rng);
    const bool expected = oracle::satisfiable(s);
    for (bool gauss : {false, true}) {
      const SolveStats r = solve(s, gauss);
      REQUIRE(r.result != SolveResult::budget_exhausted);
      CHECK((r.result == SolveResult::sat) == expected);
      if (r.result == SolveResult::sat) {
        REQUIRE(r.model);
        CHECK(s.satisfied_by(*r.model));
      }
    }
  }
}

TEST_CASE("nonzero-solution query matches the solution count") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 8;
    const XorFormula f = support::random_formula(n, 1 + trial % (2 * n), rng);
    const bool nonzero = oracle::count_solutions(f) > 1;
    CHECK(is_uniquely_satisfiable(f) == !nonzero);
    for (bool gauss : {false, true}) {
      CHECK((solve(nontrivial_solution_instance(f), gauss).result == SolveResult::sat) == nonzero);
      CHECK((solve(nontrivial_solution_formula(f), gauss).result == SolveResult::sat) == nonzero);
    }
  }
}

TEST_CASE("Gaussian elimination decides linear systems without branching") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    SatInstance s;
    s.num_vars = 12;
    const XorFormula f = support::random_formula(12, 20, rng, 0.5);
    for (const auto& c : f.clauses()) s.xors.push_back({{c.vars[0], c.vars[1], c.vars[2]}, c.rhs});
    CHECK(solve(s, true).decisions == 0);
  }
}

TEST_CASE("decision budget is honoured") {
  SatInstance s;
  s.num_vars = 30;
  for (Var v = 1; v + 2 <= 30; v += 3) s.xors.push_back({{v, v + 1, v + 2}, false});
  s.clauses.push_back({});
  for (int v = 1; v <= 30; ++v) s.clauses.back().push_back(-v);
  s.clauses.push_back({1, 2, 3});
  SolveBudget b;
  b.max_decisions = 0;
  const SolveStats r = solve(s, false, b);
  CHECK(r.decisions == 0);
  CHECK(r.result == SolveResult::budget_exhausted);
  CHECK(solve(s, false).result == SolveResult::sat);
}

TEST_CASE("gauss_ratio") {
  SECTION("requires a uniquely satisfiable formula") {
    const XorFormula f = make_formula(4, {{{1, 2, 3}, false}});
    CHECK_THROWS_AS(gauss_ratio(f, {}), std::invalid_argument);
  }
  SECTION("is the smoothed decision quotient") {
    const XorFormula f = make_formula(4, {{{1, 2, 3}, false}, {{1, 2, 4}, false}, {{1, 3, 4}, false}, {{2, 3, 4}, false}});
    const GaussGap g = gauss_ratio(f, {});
    CHECK(g.with_gauss.decisions == 0);
    CHECK(g.with_gauss.result == SolveResult::unsat);
    CHECK(g.without_gauss.result == SolveResult::unsat);
    CHECK(g.ratio == Catch::Approx(static_cast<double>(g.without_gauss.decisions + 1)));
  }
  SECTION("is infinite when only the plain run runs out") {
    std::mt19937_64 rng(8);
    XorFormula f;
    do f = support::random_formula(40, 80, rng);
    while (!is_uniquely_satisfiable(f));
    SolveBudget b;
    b.max_decisions = 1;
    const GaussGap g = gauss_ratio(f, b);
    CHECK(g.without_gauss.result == SolveResult::budget_exhausted);
    CHECK(std::isinf(g.ratio));
  }
}
