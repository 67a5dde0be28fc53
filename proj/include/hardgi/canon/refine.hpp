#pragma once

// Color refinement on ordered partitions.
//
// Cells occupy contiguous ranges of a position array and a cell is named by its first
// position, so cell names are invariant under isomorphism as long as the initial ordering is.
// Splitting follows the usual worklist scheme: count neighbours in a splitter cell, split every
// cell whose members disagree, order fragments by ascending count, and enqueue all fragments
// (or all but the first largest when the split cell was not already queued).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <vector>

#include "hardgi/canon/partition.hpp"
#include "hardgi/graph.hpp"

namespace hardgi {

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h * 0xFF51AFD7ED558CCDULL;
}

class OrderedPartition {
 public:
  OrderedPartition() = default;

  /// Cells ordered by ascending label, vertices inside a cell by ascending id.
  template <class Label>
  static OrderedPartition from_labels(const std::vector<Label>& labels) {
    OrderedPartition p;
    const std::size_t n = labels.size();
    p.lab_.resize(n);
    std::iota(p.lab_.begin(), p.lab_.end(), Vertex{0});
    std::stable_sort(p.lab_.begin(), p.lab_.end(), [&](Vertex a, Vertex b) { return labels[a] < labels[b]; });
    p.pos_.resize(n);
    p.cell_.resize(n);
    p.len_.assign(n, 0);
    std::uint32_t start = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i > 0 && labels[p.lab_[i]] != labels[p.lab_[i - 1]]) start = i;
      p.pos_[p.lab_[i]] = i;
      p.cell_[p.lab_[i]] = start;
      ++p.len_[start];
      if (start == i) ++p.cells_;
    }
    return p;
  }

  static OrderedPartition from_graph_colors(const Graph& g) {
    std::vector<Color> c(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) c[v] = g.color(v);
    return from_labels(c);
  }

  std::size_t size() const { return lab_.size(); }
  std::size_t cell_count() const { return cells_; }
  bool is_discrete() const { return cells_ == lab_.size(); }
  /// Position-ordered vertex array.
  const std::vector<Vertex>& lab() const { return lab_; }
  std::uint32_t cell_of(Vertex v) const { return cell_[v]; }
  std::uint32_t cell_length(std::uint32_t start) const { return len_[start]; }
  std::uint64_t trace() const { return trace_; }

  /// All cell starts in ascending order.
  std::vector<std::uint32_t> cell_starts() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < lab_.size(); i += len_[i]) out.push_back(i);
    return out;
  }

  Partition to_partition() const { return Partition::from_labels(cell_); }

  /// Refines to the coarsest equitable partition using every cell as an initial splitter.
  void refine_all(const Graph& g) {
    std::deque<std::uint32_t> queue;
    in_queue_.assign(lab_.size(), 0);
    for (auto s : cell_starts()) {
      queue.push_back(s);
      in_queue_[s] = 1;
    }
    run(g, queue);
  }

  /// Moves v to the front of its cell as a singleton and re-refines.
  void individualize(const Graph& g, Vertex v) {
    const std::uint32_t c = cell_[v];
    const std::uint32_t len = len_[c];
    trace_ = hash_mix(trace_, 0xD1CE0000ULL + c);
    if (len == 1) return;
    const Vertex first = lab_[c];
    const std::uint32_t pv = pos_[v];
    std::swap(lab_[c], lab_[pv]);
    pos_[v] = c;
    pos_[first] = pv;
    len_[c] = 1;
    len_[c + 1] = len - 1;
    for (std::uint32_t i = c + 1; i < c + len; ++i) cell_[lab_[i]] = c + 1;
    ++cells_;
    std::deque<std::uint32_t> queue{c};
    in_queue_.assign(lab_.size(), 0);
    in_queue_[c] = 1;
    run(g, queue);
  }

 private:
  void run(const Graph& g, std::deque<std::uint32_t>& queue) {
    const std::size_t n = lab_.size();
    count_.assign(n, 0);
    std::vector<Vertex> touched;
    std::vector<std::uint32_t> touched_cells;
    std::vector<std::pair<std::uint32_t, Vertex>> members;
    while (!queue.empty() && cells_ < n) {
      const std::uint32_t s = queue.front();
      queue.pop_front();
      in_queue_[s] = 0;
      touched.clear();
      touched_cells.clear();
      const std::uint32_t s_len = len_[s];
      for (std::uint32_t i = s; i < s + s_len; ++i) {
        for (auto w : g.neighbors(lab_[i])) {
          if (count_[w]++ == 0) touched.push_back(w);
        }
      }
      for (auto w : touched) touched_cells.push_back(cell_[w]);
      std::sort(touched_cells.begin(), touched_cells.end());
      touched_cells.erase(std::unique(touched_cells.begin(), touched_cells.end()), touched_cells.end());
      trace_ = hash_mix(trace_, s);
      for (const std::uint32_t c : touched_cells) {
        const std::uint32_t len = len_[c];
        if (len == 1) continue;
        members.clear();
        bool uniform = true;
        for (std::uint32_t i = c; i < c + len; ++i) {
          const Vertex v = lab_[i];
          members.emplace_back(count_[v], v);
          uniform = uniform && count_[v] == members.front().first;
        }
        if (uniform) continue;
        std::stable_sort(members.begin(), members.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const bool was_queued = in_queue_[c] != 0;
        std::uint32_t frag_start = c;
        std::uint32_t largest_start = c, largest_len = 0;
        std::vector<std::uint32_t> frags;
        trace_ = hash_mix(trace_, 0xC0000000ULL + c);
        for (std::uint32_t k = 0; k < len; ++k) {
          const std::uint32_t at = c + k;
          lab_[at] = members[k].second;
          pos_[lab_[at]] = at;
          if (k > 0 && members[k].first != members[k - 1].first) {
            len_[frag_start] = at - frag_start;
            frags.push_back(frag_start);
            frag_start = at;
          }
          cell_[lab_[at]] = frag_start;
        }
        len_[frag_start] = c + len - frag_start;
        frags.push_back(frag_start);
        cells_ += frags.size() - 1;
        for (auto f : frags) {
          trace_ = hash_mix(trace_, (static_cast<std::uint64_t>(len_[f]) << 32) | count_[lab_[f]]);
          if (len_[f] > largest_len) {
            largest_len = len_[f];
            largest_start = f;
          }
        }
        for (auto f : frags) {
          if (in_queue_[f]) continue;
          if (!was_queued && f == largest_start) continue;
          queue.push_back(f);
          in_queue_[f] = 1;
        }
      }
      for (auto w : touched) count_[w] = 0;
    }
    trace_ = hash_mix(trace_, cells_);
  }

  std::vector<Vertex> lab_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> cell_;
  std::vector<std::uint32_t> len_;
  std::size_t cells_ = 0;
  std::uint64_t trace_ = 0;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint8_t> in_queue_;
};

/// Coarsest equitable refinement of `initial` (1-WL / colour refinement).
inline Partition color_refine(const Graph& g, const Partition& initial) {
  if (initial.element_count() != g.vertex_count()) throw std::invalid_argument("color_refine: partition size mismatch");
  OrderedPartition p = OrderedPartition::from_labels(initial.labels());
  p.refine_all(g);
  return p.to_partition();
}

/// Colour refinement starting from the graph's own vertex colours.
inline Partition color_refine(const Graph& g) {
  OrderedPartition p = OrderedPartition::from_graph_colors(g);
  p.refine_all(g);
  return p.to_partition();
}

/// Puts v into a fresh singleton cell and refines.
inline Partition individualize(const Graph& g, const Partition& p, Vertex v) {
  if (v >= g.vertex_count()) throw std::out_of_range("individualize: vertex out of range");
  std::vector<std::uint64_t> labels(p.element_count());
  for (std::size_t e = 0; e < labels.size(); ++e) labels[e] = 2 * static_cast<std::uint64_t>(p.cell_of(e)) + 1;
  labels[v] = 2 * static_cast<std::uint64_t>(p.cell_of(v));
  OrderedPartition op = OrderedPartition::from_labels(labels);
  op.refine_all(g);
  return op.to_partition();
}

}  // namespace hardgi
