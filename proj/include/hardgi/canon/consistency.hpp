#pragma once

// Exact k-local consistency of XOR systems via the existential k-pebble game.
//
// Verifier survives forever iff the greatest family of consistent partial assignments of size
// at most k that is closed under restriction and has the extension property (every member of
// size < k extends to any further variable) is nonempty. The family is computed by downward
// deletion from the set of all consistent partial assignments.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardgi/formula.hpp"

namespace hardgi {

struct ConsistencyBudget {
  /// Largest number of partial assignments the checker may materialize.
  std::uint64_t max_states = 80'000'000;
};

struct ParityConstraint {
  std::vector<Var> vars;
  bool rhs = false;
};

namespace detail {

class PebbleFixpoint {
 public:
  PebbleFixpoint(const std::vector<ParityConstraint>& cons, std::size_t num_vars, std::size_t k,
                 const ConsistencyBudget& budget) {
    // only variables that occur in some constraint can carry a pebble that matters
    std::vector<int> local(num_vars + 1, -1);
    for (const auto& c : cons) {
      for (auto v : c.vars) {
        if (v < 1 || v > num_vars) throw std::invalid_argument("local_consistency: variable out of range");
        if (local[v] < 0) local[v] = 0;
      }
    }
    for (std::size_t v = 1; v <= num_vars; ++v) {
      if (local[v] >= 0) local[v] = static_cast<int>(n_++);
    }
    if (n_ > 63) throw std::length_error("local_consistency: more than 63 occurring variables");
    k_ = std::min(k, n_);
    occurs_.resize(n_);
    for (const auto& c : cons) {
      Constraint lc{0, c.rhs};
      for (auto v : c.vars) lc.mask ^= std::uint64_t{1} << local[v];
      if (lc.mask == 0) {
        if (lc.rhs) trivially_false_ = true;
        continue;
      }
      const auto idx = constraints_.size();
      constraints_.push_back(lc);
      for (std::size_t x = 0; x < n_; ++x) {
        if (lc.mask >> x & 1) occurs_[x].push_back(idx);
      }
    }
    binom_.assign(n_ + 1, std::vector<std::uint64_t>(k_ + 2, 0));
    for (std::size_t a = 0; a <= n_; ++a) {
      binom_[a][0] = 1;
      for (std::size_t b = 1; b <= std::min(a, k_ + 1); ++b) {
        binom_[a][b] = binom_[a - 1][b - 1] + (b <= a - 1 ? binom_[a - 1][b] : 0);
      }
    }
    offset_.assign(k_ + 2, 0);
    for (std::size_t j = 0; j <= k_; ++j) offset_[j + 1] = offset_[j] + (binom_[n_][j] << j);
    if (offset_[k_ + 1] > budget.max_states) {
      throw std::length_error("local_consistency: " + std::to_string(offset_[k_ + 1]) +
                              " partial assignments exceed the budget");
    }
  }

  bool run() {
    if (trivially_false_) return false;
    alive_.assign(offset_[k_ + 1], 0);
    // consistent partial assignments, built by size
    alive_[0] = 1;
    for (std::size_t j = 1; j <= k_; ++j) {
      for_each_subset(j, [&](std::uint64_t mask) {
        const std::size_t top = 63 - static_cast<std::size_t>(std::countl_zero(mask));
        const std::uint64_t parent_mask = mask & ~(std::uint64_t{1} << top);
        const std::uint64_t base = index(mask, 0);
        const std::uint64_t parent_base = index(parent_mask, 0);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << j); ++bits) {
          // top is the highest element, so it sits in the highest bit of `bits`
          const std::uint64_t parent_bits = bits & ~(std::uint64_t{1} << (j - 1));
          if (!alive_[parent_base + parent_bits]) continue;
          if (violates(mask, bits, top)) continue;
          alive_[base + bits] = 1;
        }
      });
    }
    // extension property
    for (std::size_t j = 0; j < k_; ++j) {
      for_each_subset(j, [&](std::uint64_t mask) {
        const std::uint64_t base = index(mask, 0);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << j); ++bits) {
          if (alive_[base + bits] && !extendable(mask, bits)) kill(mask, bits);
        }
      });
    }
    while (!work_.empty()) {
      const auto [mask, bits] = work_.back();
      work_.pop_back();
      const std::size_t j = static_cast<std::size_t>(std::popcount(mask));
      if (j < k_) {
        for (std::size_t x = 0; x < n_; ++x) {
          if (mask >> x & 1) continue;
          for (int b = 0; b < 2; ++b) {
            const auto [cm, cb] = insert(mask, bits, x, b != 0);
            if (alive_[index(cm, cb)]) kill(cm, cb);
          }
        }
      }
      for (std::size_t y = 0; y < n_; ++y) {
        if (!(mask >> y & 1)) continue;
        const auto [pm, pb] = erase(mask, bits, y);
        if (!alive_[index(pm, pb)]) continue;
        const auto [m0, b0] = insert(pm, pb, y, false);
        const auto [m1, b1] = insert(pm, pb, y, true);
        if (!alive_[index(m0, b0)] && !alive_[index(m1, b1)]) kill(pm, pb);
      }
    }
    return alive_[0] != 0;
  }

 private:
  struct Constraint {
    std::uint64_t mask;
    bool rhs;
  };

  template <class F>
  void for_each_subset(std::size_t j, F&& f) const {
    if (j == 0) {
      f(std::uint64_t{0});
      return;
    }
    std::uint64_t mask = (std::uint64_t{1} << j) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n_;
    while (mask < limit) {
      f(mask);
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }

  std::uint64_t index(std::uint64_t mask, std::uint64_t bits) const {
    const std::size_t j = static_cast<std::size_t>(std::popcount(mask));
    std::uint64_t rank = 0;
    std::size_t i = 0;
    for (std::uint64_t m = mask; m; m &= m - 1) {
      rank += binom_[static_cast<std::size_t>(std::countr_zero(m))][++i];
    }
    return offset_[j] + (rank << j) + bits;
  }

  // Bit p of `bits` is the value of the p-th smallest variable in `mask`.
  static std::pair<std::uint64_t, std::uint64_t> insert(std::uint64_t mask, std::uint64_t bits, std::size_t x, bool value) {
    const auto p = static_cast<unsigned>(std::popcount(mask & ((std::uint64_t{1} << x) - 1)));
    const std::uint64_t low = bits & ((std::uint64_t{1} << p) - 1);
    const std::uint64_t high = bits >> p;
    return {mask | (std::uint64_t{1} << x), low | (std::uint64_t{value} << p) | (high << (p + 1))};
  }
  static std::pair<std::uint64_t, std::uint64_t> erase(std::uint64_t mask, std::uint64_t bits, std::size_t y) {
    const auto p = static_cast<unsigned>(std::popcount(mask & ((std::uint64_t{1} << y) - 1)));
    const std::uint64_t low = bits & ((std::uint64_t{1} << p) - 1);
    const std::uint64_t high = bits >> (p + 1);
    return {mask & ~(std::uint64_t{1} << y), low | (high << p)};
  }

  bool value_of(std::uint64_t mask, std::uint64_t bits, std::size_t x) const {
    const auto p = static_cast<unsigned>(std::popcount(mask & ((std::uint64_t{1} << x) - 1)));
    return (bits >> p) & 1;
  }

  // Constraints through `newest` whose variables are all assigned and whose parity fails.
  bool violates(std::uint64_t mask, std::uint64_t bits, std::size_t newest) const {
    for (auto ci : occurs_[newest]) {
      const auto& c = constraints_[ci];
      if ((c.mask & mask) != c.mask) continue;
      bool parity = false;
      for (std::uint64_t m = c.mask; m; m &= m - 1) parity ^= value_of(mask, bits, static_cast<std::size_t>(std::countr_zero(m)));
      if (parity != c.rhs) return true;
    }
    return false;
  }

  bool extendable(std::uint64_t mask, std::uint64_t bits) const {
    for (std::size_t x = 0; x < n_; ++x) {
      if (mask >> x & 1) continue;
      const auto [m0, b0] = insert(mask, bits, x, false);
      const auto [m1, b1] = insert(mask, bits, x, true);
      if (!alive_[index(m0, b0)] && !alive_[index(m1, b1)]) return false;
    }
    return true;
  }

  void kill(std::uint64_t mask, std::uint64_t bits) {
    alive_[index(mask, bits)] = 0;
    work_.emplace_back(mask, bits);
  }

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  bool trivially_false_ = false;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<std::uint64_t> offset_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> work_;
};

}  // namespace detail

inline std::vector<ParityConstraint> parity_constraints(const XorFormula& f) {
  std::vector<ParityConstraint> out;
  for (const auto& c : f.clauses()) out.push_back({{c.vars[0], c.vars[1], c.vars[2]}, c.rhs});
  return out;
}

inline std::vector<ParityConstraint> parity_constraints(const PinnedSystem& p) {
  auto out = parity_constraints(p.base);
  out.push_back({{p.var}, p.value});
  return out;
}

/// Whether Verifier has a strategy to play the k-pebble game forever.
inline bool local_consistency(const XorFormula& f, std::size_t k, const ConsistencyBudget& budget = {}) {
  return detail::PebbleFixpoint(parity_constraints(f), f.num_vars(), k, budget).run();
}

inline bool local_consistency(const PinnedSystem& p, std::size_t k, const ConsistencyBudget& budget = {}) {
  return detail::PebbleFixpoint(parity_constraints(p), p.base.num_vars(), k, budget).run();
}

/// Number of partial assignments the checker would allocate.
inline std::uint64_t local_consistency_states(std::size_t occurring_vars, std::size_t k) {
  k = std::min(k, occurring_vars);
  std::uint64_t total = 0, c = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    total += c << j;
    c = c * (occurring_vars - j) / (j + 1);
  }
  return total;
}

}  // namespace hardgi
