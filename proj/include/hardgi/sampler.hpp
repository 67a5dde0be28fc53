#pragma once

// Seeded draws from the uniform distributions over homogeneous systems H(m, n) and over
// general 3-XOR formulas F(m, n).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hardgi/formula.hpp"
#include "hardgi/rng.hpp"

namespace hardgi {

enum class Distribution { homogeneous, general };

struct SampleConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  /// When set, m is derived as round(ratio * n).
  std::optional<double> ratio;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::homogeneous;
};

constexpr std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

/// Number of pairwise inequivalent clauses available to the sampler.
constexpr std::uint64_t clause_universe(std::size_t n, Distribution d) {
  return d == Distribution::homogeneous ? choose3(n) : 2 * choose3(n);
}

inline std::size_t resolved_clause_count(const SampleConfig& cfg) {
  if (cfg.ratio) {
    if (!(*cfg.ratio > 0.0) || !std::isfinite(*cfg.ratio)) throw std::invalid_argument("ratio must be positive");
    return static_cast<std::size_t>(std::llround(*cfg.ratio * static_cast<double>(cfg.n)));
  }
  return cfg.m;
}

inline void validate(const SampleConfig& cfg) {
  if (cfg.n < 3) throw std::invalid_argument("sampler: n must be at least 3");
  const std::size_t m = resolved_clause_count(cfg);
  if (m < 1) throw std::invalid_argument("sampler: m must be at least 1");
  const auto limit = clause_universe(cfg.n, cfg.distribution);
  if (m > limit) {
    throw std::invalid_argument("sampler: m = " + std::to_string(m) + " exceeds the " + std::to_string(limit) +
                                " available inequivalent clauses");
  }
}

/// Lexicographic unranking of the 3-subsets of {1..n}: rank 0 is {1,2,3}.
inline std::array<Var, 3> unrank_triple(std::size_t n, std::uint64_t r) {
  std::array<Var, 3> out{};
  Var next = 1;
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const std::size_t rest = 2 - slot;
    for (;; ++next) {
      // subsets whose element at `slot` is `next`
      const std::uint64_t remaining = n - next;
      const std::uint64_t block = rest == 2 ? remaining * (remaining - 1) / 2 : rest == 1 ? remaining : 1;
      if (r < block) break;
      r -= block;
    }
    out[slot] = next++;
  }
  return out;
}

/// m distinct indices from [0, universe) without replacement. Rejection on a hash set while
/// m <= universe / 2, otherwise a partial Fisher-Yates shuffle of the full index range.
inline std::vector<std::uint64_t> draw_distinct(Xoshiro256StarStar& rng, std::uint64_t universe, std::size_t m) {
  std::vector<std::uint64_t> out;
  out.reserve(m);
  if (m <= universe / 2) {
    std::unordered_set<std::uint64_t> seen;
    while (out.size() < m) {
      const auto r = rng.below(universe);
      if (seen.insert(r).second) out.push_back(r);
    }
  } else {
    std::vector<std::uint64_t> all(universe);
    for (std::uint64_t i = 0; i < universe; ++i) all[i] = i;
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = i + rng.below(universe - i);
      std::swap(all[i], all[j]);
    }
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  }
  return out;
}

inline XorFormula sample_with(const SampleConfig& cfg, Xoshiro256StarStar& rng) {
  validate(cfg);
  const std::size_t m = resolved_clause_count(cfg);
  const auto picks = draw_distinct(rng, clause_universe(cfg.n, cfg.distribution), m);
  std::vector<RawXorClause> raw;
  raw.reserve(m);
  for (auto idx : picks) {
    if (cfg.distribution == Distribution::homogeneous) {
      raw.push_back({unrank_triple(cfg.n, idx), false});
    } else {
      raw.push_back({unrank_triple(cfg.n, idx / 2), (idx % 2) == 1});
    }
  }
  return make_formula(cfg.n, raw, Contradictions::keep);
}

inline XorFormula sample_homogeneous(const SampleConfig& cfg) {
  if (cfg.distribution != Distribution::homogeneous) throw std::invalid_argument("sample_homogeneous: wrong distribution");
  Xoshiro256StarStar rng(cfg.seed);
  return sample_with(cfg, rng);
}

inline XorFormula sample_general(const SampleConfig& cfg) {
  if (cfg.distribution != Distribution::general) throw std::invalid_argument("sample_general: wrong distribution");
  Xoshiro256StarStar rng(cfg.seed);
  return sample_with(cfg, rng);
}

}  // namespace hardgi
