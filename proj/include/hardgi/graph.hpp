#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardgi {

using Vertex = std::uint32_t;
using Color = std::uint32_t;
using Permutation = std::vector<Vertex>;

struct Edge {
  Vertex u;
  Vertex v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices 0..n-1 with optional vertex colors.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }

  void add_edge(Vertex u, Vertex v) {
    if (u == v) throw std::invalid_argument("Graph: loop at vertex " + std::to_string(u));
    if (u >= adj_.size() || v >= adj_.size()) throw std::out_of_range("Graph: endpoint out of range");
    auto& au = adj_[u];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) {
      throw std::invalid_argument("Graph: duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    au.insert(it, v);
    auto& av = adj_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edges_;
  }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Sorted ascending.
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  /// Edges as (smaller, larger) pairs in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < adj_.size(); ++u) {
      for (auto w : adj_[u]) {
        if (w > u) out.push_back({u, w});
      }
    }
    return out;
  }

  bool has_colors() const { return colors_.has_value(); }
  const std::vector<Color>& colors() const {
    if (!colors_) throw std::logic_error("Graph: no colors");
    return *colors_;
  }
  Color color(Vertex v) const { return colors_ ? (*colors_)[v] : 0; }
  void set_colors(std::vector<Color> c) {
    if (c.size() != adj_.size()) throw std::invalid_argument("Graph: color vector size mismatch");
    colors_ = std::move(c);
  }

  /// The subgraph induced on vertices 0..k-1.
  Graph prefix_subgraph(std::size_t k) const {
    Graph g(k);
    for (Vertex u = 0; u < k; ++u) {
      for (auto w : adj_[u]) {
        if (w > u && w < k) g.add_edge(u, w);
      }
    }
    if (colors_) g.set_colors(std::vector<Color>(colors_->begin(), colors_->begin() + static_cast<std::ptrdiff_t>(k)));
    return g;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t edges_ = 0;
  std::optional<std::vector<Color>> colors_;
};

/// True when p is a color- and edge-preserving bijection of g.
inline bool is_automorphism(const Graph& g, const Permutation& p) {
  const std::size_t n = g.vertex_count();
  if (p.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto x : p) {
    if (x >= n || hit[x]) return false;
    hit[x] = true;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (g.color(v) != g.color(p[v])) return false;
    if (g.degree(v) != g.degree(p[v])) return false;
  }
  for (Vertex u = 0; u < n; ++u) {
    for (auto w : g.neighbors(u)) {
      if (w > u && !g.adjacent(p[u], p[w])) return false;
    }
  }
  return true;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Vertex>(i);
  return p;
}

}  // namespace hardgi
