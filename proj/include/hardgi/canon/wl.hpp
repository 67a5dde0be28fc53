#pragma once

// k-dimensional Weisfeiler-Leman refinement on V^k.
//
// Tuples are indexed in base |V| with the first coordinate most significant. Initial colours
// are the ordered atomic type of the tuple (equalities, adjacencies and vertex colours); a
// round replaces the colour of u by (colour(u), multiset over x of the colour vector
// (colour(u[x/1]), ..., colour(u[x/k]))). Colours are renumbered in sorted signature order
// after every round, so the output does not depend on any processing order.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardgi/canon/partition.hpp"
#include "hardgi/canon/refine.hpp"
#include "hardgi/graph.hpp"

namespace hardgi {

struct WlBudget {
  /// Upper bound on |V|^(k+1) * k, the per-round signature volume.
  std::uint64_t max_work = 300'000'000;
};

inline std::uint64_t tuple_index(std::span<const Vertex> tuple, std::size_t n) {
  std::uint64_t idx = 0;
  for (auto v : tuple) idx = idx * n + v;
  return idx;
}

namespace detail {

template <std::size_t K>
Partition wl_fixed(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::size_t total = 1;
  for (std::size_t i = 0; i < K; ++i) total *= n;
  std::vector<std::uint32_t> color(total, 0);

  auto decode = [n](std::uint64_t idx) {
    std::array<Vertex, K> t{};
    for (std::size_t i = K; i-- > 0;) {
      t[i] = static_cast<Vertex>(idx % n);
      idx /= n;
    }
    return t;
  };
  std::array<std::uint64_t, K> place{};
  for (std::size_t i = 0; i < K; ++i) {
    place[i] = 1;
    for (std::size_t j = i + 1; j < K; ++j) place[i] *= n;
  }

  // Renumbers colours by sorted signature; returns the number of classes.
  auto renumber = [&](const std::vector<std::uint32_t>& flat, std::size_t width) {
    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    auto sig_less = [&](std::uint32_t a, std::uint32_t b) {
      return std::lexicographical_compare(flat.begin() + static_cast<std::ptrdiff_t>(a * width),
                                          flat.begin() + static_cast<std::ptrdiff_t>((a + 1) * width),
                                          flat.begin() + static_cast<std::ptrdiff_t>(b * width),
                                          flat.begin() + static_cast<std::ptrdiff_t>((b + 1) * width));
    };
    std::sort(order.begin(), order.end(), sig_less);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (i > 0 && sig_less(order[i - 1], order[i])) ++next;
      color[order[i]] = next;
    }
    return total == 0 ? std::size_t{0} : std::size_t{next} + 1;
  };

  {
    const std::size_t width = 1 + K;
    std::vector<std::uint32_t> flat(total * width);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const auto t = decode(idx);
      std::uint32_t pairs = 0;
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
          pairs = pairs * 3 + (t[i] == t[j] ? 2u : g.adjacent(t[i], t[j]) ? 1u : 0u);
        }
      }
      flat[idx * width] = pairs;
      for (std::size_t i = 0; i < K; ++i) flat[idx * width + 1 + i] = g.color(t[i]);
    }
    renumber(flat, width);
  }

  std::size_t classes = 0;
  for (;;) {
    const std::size_t width = 1 + n * K;
    std::vector<std::uint32_t> flat(total * width);
    std::vector<std::array<std::uint32_t, K>> entries(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const auto t = decode(idx);
      for (Vertex x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < K; ++i) {
          const std::uint64_t sub = idx + (static_cast<std::int64_t>(x) - static_cast<std::int64_t>(t[i])) * place[i];
          entries[x][i] = color[sub];
        }
      }
      std::sort(entries.begin(), entries.end());
      auto* out = &flat[idx * width];
      *out++ = color[idx];
      for (const auto& e : entries) out = std::copy(e.begin(), e.end(), out);
    }
    const std::size_t next = renumber(flat, width);
    if (next == classes) break;
    classes = next;
  }
  return Partition::from_labels(color);
}

}  // namespace detail

/// Stable k-WL partition of V^k for 2 <= k <= 4. Throws std::length_error when the instance
/// exceeds the budget.
inline Partition wl_k(const Graph& g, std::size_t k, const WlBudget& budget = {}) {
  if (k < 2 || k > 4) throw std::invalid_argument("wl_k: k must be in [2, 4]");
  long double work = static_cast<long double>(k);
  for (std::size_t i = 0; i <= k; ++i) work *= static_cast<long double>(g.vertex_count());
  if (work > static_cast<long double>(budget.max_work)) {
    throw std::length_error("wl_k: |V|=" + std::to_string(g.vertex_count()) + ", k=" + std::to_string(k) +
                            " exceeds the work budget");
  }
  switch (k) {
    case 2:
      return detail::wl_fixed<2>(g);
    case 3:
      return detail::wl_fixed<3>(g);
    default:
      return detail::wl_fixed<4>(g);
  }
}

/// Whether the constant tuples (u,...,u) and (v,...,v) get the same k-WL colour; k = 1 means
/// colour refinement.
inline bool wl_indistinguishable(const Graph& g, Vertex u, Vertex v, std::size_t k, const WlBudget& budget = {}) {
  if (u >= g.vertex_count() || v >= g.vertex_count()) throw std::out_of_range("wl_indistinguishable: vertex out of range");
  if (k == 0) throw std::invalid_argument("wl_indistinguishable: k must be positive");
  if (u == v) return true;
  if (k == 1) return color_refine(g).same_cell(u, v);
  const Partition p = wl_k(g, k, budget);
  const std::vector<Vertex> tu(k, u), tv(k, v);
  return p.same_cell(tuple_index(tu, g.vertex_count()), tuple_index(tv, g.vertex_count()));
}

}  // namespace hardgi
