#pragma once

// Individualization-refinement automorphism search.
//
// The first path descends by individualizing the first vertex of the target cell until the
// partition is discrete; its leaf is the reference. Then, from the deepest level up, every
// other vertex of that level's target cell is tried unless a known automorphism already puts
// it in the orbit of the first-path vertex (or of a vertex already shown inequivalent). A
// subtree is searched for a leaf whose labelling maps the reference leaf onto it by an
// automorphism; nodes whose refinement trace differs from the first path at the same depth
// are cut. The group order is the product over levels of the first-path vertex orbit sizes.

#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hardgi/canon/partition.hpp"
#include "hardgi/canon/refine.hpp"
#include "hardgi/graph.hpp"

namespace hardgi {

using BigCount = boost::multiprecision::cpp_int;

enum class CellSelector { first_smallest, first_largest, first };

inline const char* to_string(CellSelector s) {
  switch (s) {
    case CellSelector::first_smallest:
      return "first-smallest";
    case CellSelector::first_largest:
      return "first-largest";
    case CellSelector::first:
      return "first";
  }
  return "?";
}

enum class SearchStatus { complete, timeout };

struct SearchBudget {
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::duration<double>> max_time;
};

struct AutReport {
  std::vector<Permutation> generators;
  BigCount group_size = 1;
  Partition orbit_partition;
  std::uint64_t search_nodes = 0;
  SearchStatus status = SearchStatus::complete;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }
  void absorb(const Permutation& p) {
    for (std::size_t v = 0; v < p.size(); ++v) unite(v, p[v]);
  }
  Partition to_partition() {
    std::vector<std::size_t> roots(parent_.size());
    for (std::size_t v = 0; v < roots.size(); ++v) roots[v] = find(v);
    return Partition::from_labels(roots);
  }

 private:
  std::vector<std::size_t> parent_;
};

namespace detail {

struct SearchAborted {};

class IrSearch {
 public:
  IrSearch(const Graph& g, CellSelector selector, const SearchBudget& budget)
      : g_(g), selector_(selector), budget_(budget), start_(std::chrono::steady_clock::now()) {}

  AutReport run() {
    AutReport report;
    const std::size_t n = g_.vertex_count();
    UnionFind orbits(n);
    try {
      OrderedPartition root = OrderedPartition::from_graph_colors(g_);
      root.refine_all(g_);
      count_node();
      path_.push_back(root);
      while (!path_.back().is_discrete()) {
        const std::uint32_t t = select(path_.back());
        targets_.push_back(t);
        const Vertex v = path_.back().lab()[t];
        path_vertices_.push_back(v);
        OrderedPartition child = path_.back();
        child.individualize(g_, v);
        count_node();
        path_.push_back(std::move(child));
      }
      for (std::size_t level = targets_.size(); level-- > 0;) {
        const OrderedPartition& node = path_[level];
        const std::uint32_t t = targets_[level];
        const Vertex v = path_vertices_[level];
        std::vector<Vertex> failed;
        std::vector<Vertex> prefix(path_vertices_.begin(), path_vertices_.begin() + static_cast<std::ptrdiff_t>(level));
        for (std::uint32_t i = t; i < t + node.cell_length(t); ++i) {
          const Vertex w = node.lab()[i];
          if (orbits.find(w) == orbits.find(v)) continue;
          bool known_bad = false;
          for (auto f : failed) known_bad = known_bad || orbits.find(f) == orbits.find(w);
          if (known_bad) continue;
          prefix.push_back(w);
          auto gamma = explore(node, w, level + 1, prefix);
          prefix.pop_back();
          if (gamma) {
            orbits.absorb(*gamma);
            generators_.push_back(std::move(*gamma));
          } else {
            failed.push_back(w);
          }
        }
        std::size_t orbit_size = 0;
        for (std::uint32_t i = t; i < t + node.cell_length(t); ++i) {
          orbit_size += orbits.find(node.lab()[i]) == orbits.find(v);
        }
        report.group_size *= orbit_size;
      }
    } catch (const SearchAborted&) {
      report.status = SearchStatus::timeout;
    }
    report.generators = generators_;
    report.search_nodes = nodes_;
    report.orbit_partition = orbits.to_partition();
    return report;
  }

 private:
  void count_node() {
    if (budget_.max_nodes && nodes_ >= *budget_.max_nodes) throw SearchAborted{};
    ++nodes_;
    if (budget_.max_time && (nodes_ & 63) == 0 && std::chrono::steady_clock::now() - start_ >= *budget_.max_time) {
      throw SearchAborted{};
    }
  }

  std::uint32_t select(const OrderedPartition& p) const {
    std::uint32_t best = 0;
    std::uint32_t best_len = 0;
    for (std::uint32_t s = 0; s < p.size(); s += p.cell_length(s)) {
      const std::uint32_t len = p.cell_length(s);
      if (len < 2) continue;
      if (selector_ == CellSelector::first) return s;
      const bool better = best_len == 0 || (selector_ == CellSelector::first_smallest ? len < best_len : len > best_len);
      if (better) {
        best = s;
        best_len = len;
      }
    }
    return best;
  }

  // Searches below (parent, w) for a leaf equivalent to the first-path leaf.
  std::optional<Permutation> explore(const OrderedPartition& parent, Vertex w, std::size_t depth,
                                     std::vector<Vertex>& sequence) {
    OrderedPartition node = parent;
    node.individualize(g_, w);
    count_node();
    const OrderedPartition& ref = path_[depth];
    if (node.trace() != ref.trace() || node.cell_count() != ref.cell_count()) return std::nullopt;
    if (node.is_discrete()) {
      const auto& leaf = path_.back().lab();
      Permutation gamma(leaf.size());
      for (std::size_t k = 0; k < leaf.size(); ++k) gamma[leaf[k]] = node.lab()[k];
      if (is_automorphism(g_, gamma)) return gamma;
      return std::nullopt;
    }
    const std::uint32_t t = select(node);
    if (depth >= targets_.size() || t != targets_[depth]) return std::nullopt;
    // orbits of the known automorphisms that fix the current sequence pointwise
    UnionFind local(g_.vertex_count());
    for (const auto& gen : generators_) {
      bool fixes = true;
      for (auto x : sequence) fixes = fixes && gen[x] == x;
      if (fixes) local.absorb(gen);
    }
    std::vector<Vertex> tried;
    for (std::uint32_t i = t; i < t + node.cell_length(t); ++i) {
      const Vertex u = node.lab()[i];
      bool covered = false;
      for (auto x : tried) covered = covered || local.find(x) == local.find(u);
      if (covered) continue;
      tried.push_back(u);
      sequence.push_back(u);
      auto found = explore(node, u, depth + 1, sequence);
      sequence.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }

  const Graph& g_;
  CellSelector selector_;
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  std::vector<OrderedPartition> path_;
  std::vector<std::uint32_t> targets_;
  std::vector<Vertex> path_vertices_;
  std::vector<Permutation> generators_;
};

}  // namespace detail

/// Automorphism group order, generators and orbits by individualization-refinement.
inline AutReport ir_automorphisms(const Graph& g, const SearchBudget& budget = {},
                                  CellSelector selector = CellSelector::first_smallest) {
  detail::IrSearch search(g, selector, budget);
  return search.run();
}

}  // namespace hardgi
