#pragma once

// Graphs lifted from 3-XOR formulas: the clause/variable incidence graph, the clause-gadget
// graph, and the clause-gadget graph with the order gadget attached.
//
// Vertex numbering (frozen; exported files depend on it):
//   X_j^b                      -> 2(j-1) + b                        j = 1..n, b in {0,1}
//   clause c, tag t            -> 2n + 4(c-1) + t                   t: 0=000 1=011 2=110 3=101
//   order gadget i_l, i_r, i_s -> 2n + 4m + 3(i-1) + {0, 1, 2}      i = 1..n-1
// Clauses are numbered in the formula's canonical order.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardgi/formula.hpp"
#include "hardgi/gf2.hpp"
#include "hardgi/graph.hpp"

namespace hardgi {

enum class GadgetMode { full, core };

inline const char* to_string(GadgetMode m) { return m == GadgetMode::full ? "full" : "core"; }

/// Negation masks of the four clause copies, first variable in the high bit.
inline constexpr std::array<unsigned, 4> kClauseTags = {0b000, 0b011, 0b110, 0b101};

class VertexScheme {
 public:
  VertexScheme(std::size_t n, std::size_t m) : n_(n), m_(m) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  Vertex variable(Var j, bool bit) const { return static_cast<Vertex>(2 * (j - 1) + (bit ? 1 : 0)); }
  /// c is 1-based; tag_index indexes kClauseTags.
  Vertex clause(std::size_t c, std::size_t tag_index) const {
    return static_cast<Vertex>(2 * n_ + 4 * (c - 1) + tag_index);
  }
  Vertex order_left(std::size_t i) const { return static_cast<Vertex>(2 * n_ + 4 * m_ + 3 * (i - 1)); }
  Vertex order_right(std::size_t i) const { return order_left(i) + 1; }
  Vertex order_stem(std::size_t i) const { return order_left(i) + 2; }

  std::size_t core_vertices() const { return 2 * n_ + 4 * m_; }
  std::size_t full_vertices() const { return 4 * m_ + 2 * n_ + 3 * (n_ - 1); }
  std::size_t core_edges() const { return 12 * m_ + n_; }
  std::size_t full_edges() const { return 12 * m_ + n_ + 6 * (n_ - 1); }

  std::size_t expected_vertices(GadgetMode mode) const { return mode == GadgetMode::full ? full_vertices() : core_vertices(); }
  std::size_t expected_edges(GadgetMode mode) const { return mode == GadgetMode::full ? full_edges() : core_edges(); }

 private:
  std::size_t n_;
  std::size_t m_;
};

/// Bipartite clause/variable graph: variable j -> j-1 (color 0), clause c -> n+c-1 (color 1).
inline Graph incidence_graph(const XorFormula& f) {
  if (!f.homogeneous()) throw std::invalid_argument("incidence_graph: formula is not homogeneous");
  const std::size_t n = f.num_vars();
  Graph g(n + f.num_clauses());
  std::vector<Color> colors(g.vertex_count(), 0);
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    const auto cv = static_cast<Vertex>(n + c);
    colors[cv] = 1;
    for (auto v : f.clauses()[c].vars) g.add_edge(v - 1, cv);
  }
  g.set_colors(std::move(colors));
  return g;
}

/// Clause gadgets plus one edge {X^0, X^1} per variable. A clause with rhs 1 is taken with
/// its first variable negated; copy t then negates the positions set in kClauseTags[t].
/// A positive literal connects to X^1, a negated one to X^0.
inline Graph build_core(const XorFormula& f) {
  const VertexScheme vs(f.num_vars(), f.num_clauses());
  Graph g(vs.core_vertices());
  for (Var j = 1; j <= f.num_vars(); ++j) g.add_edge(vs.variable(j, false), vs.variable(j, true));
  for (std::size_t c = 1; c <= f.num_clauses(); ++c) {
    const XorClause& cl = f.clauses()[c - 1];
    const unsigned base = cl.rhs ? 0b100u : 0u;
    for (std::size_t t = 0; t < 4; ++t) {
      const unsigned neg = base ^ kClauseTags[t];
      for (std::size_t pos = 0; pos < 3; ++pos) {
        const bool negated = (neg >> (2 - pos)) & 1u;
        g.add_edge(vs.clause(c, t), vs.variable(cl.vars[pos], !negated));
      }
    }
  }
  if (g.edge_count() != vs.core_edges()) throw std::logic_error("build_core: edge count formula violated");
  return g;
}

/// The core graph plus, for each i < n, vertices i_l, i_r, i_s and edges
/// (i_l,i_r), (i_r,i_s), (i_l,X_i^0), (i_l,X_i^1), (i_r,X_{i+1}^0), (i_r,X_{i+1}^1).
inline Graph build_full(const XorFormula& f) {
  if (f.num_vars() < 2) throw std::invalid_argument("build_full: need at least 2 variables");
  const VertexScheme vs(f.num_vars(), f.num_clauses());
  const Graph core = build_core(f);
  Graph g(vs.full_vertices());
  for (const auto& e : core.edges()) g.add_edge(e.u, e.v);
  for (std::size_t i = 1; i < f.num_vars(); ++i) {
    const auto l = vs.order_left(i), r = vs.order_right(i), s = vs.order_stem(i);
    const auto vi = static_cast<Var>(i);
    g.add_edge(l, r);
    g.add_edge(r, s);
    g.add_edge(l, vs.variable(vi, false));
    g.add_edge(l, vs.variable(vi, true));
    g.add_edge(r, vs.variable(vi + 1, false));
    g.add_edge(r, vs.variable(vi + 1, true));
  }
  if (g.vertex_count() != vs.full_vertices() || g.edge_count() != vs.full_edges()) {
    throw std::logic_error("build_full: size formula violated");
  }
  return g;
}

inline Graph build_graph(const XorFormula& f, GadgetMode mode) {
  return mode == GadgetMode::full ? build_full(f) : build_core(f);
}

/// The automorphism induced by a solution of the homogeneous companion: swap X^0 and X^1 when
/// the variable is 1, and permute each clause gadget by the matching negation mask.
inline Permutation assignment_automorphism(const XorFormula& f, const Gf2Vector& assignment, GadgetMode mode) {
  if (assignment.size() != f.num_vars()) throw std::invalid_argument("assignment_automorphism: length mismatch");
  const VertexScheme vs(f.num_vars(), f.num_clauses());
  Permutation p = identity_permutation(vs.expected_vertices(mode));
  for (Var j = 1; j <= f.num_vars(); ++j) {
    if (assignment.get(j - 1)) {
      p[vs.variable(j, false)] = vs.variable(j, true);
      p[vs.variable(j, true)] = vs.variable(j, false);
    }
  }
  for (std::size_t c = 1; c <= f.num_clauses(); ++c) {
    const auto& cl = f.clauses()[c - 1];
    unsigned mask = 0;
    for (std::size_t pos = 0; pos < 3; ++pos) {
      if (assignment.get(cl.vars[pos] - 1)) mask |= 1u << (2 - pos);
    }
    for (std::size_t t = 0; t < 4; ++t) {
      const unsigned target = kClauseTags[t] ^ mask;
      std::size_t u = 0;
      while (u < 4 && kClauseTags[u] != target) ++u;
      if (u == 4) throw std::invalid_argument("assignment_automorphism: assignment violates a clause");
      p[vs.clause(c, t)] = vs.clause(c, u);
    }
  }
  return p;
}

}  // namespace hardgi
