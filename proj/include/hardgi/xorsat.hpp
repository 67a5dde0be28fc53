#pragma once

// Instrumented DPLL over CNF clauses and XOR rows, with an optional up-front Gaussian
// elimination of the XOR part.
//
// No clause learning and no restarts: the decision count of plain DPLL is the cost signal
// compared against the Gaussian path.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardgi/formula.hpp"
#include "hardgi/gf2.hpp"

namespace hardgi {

enum class SolveResult { sat, unsat, budget_exhausted };

inline const char* to_string(SolveResult r) {
  switch (r) {
    case SolveResult::sat:
      return "SAT";
    case SolveResult::unsat:
      return "UNSAT";
    case SolveResult::budget_exhausted:
      return "BUDGET_EXHAUSTED";
  }
  return "?";
}

struct SolveBudget {
  std::optional<std::uint64_t> max_decisions;
  std::optional<std::chrono::duration<double>> max_time;

  bool bounded() const { return max_decisions.has_value() || max_time.has_value(); }
};

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::chrono::duration<double> elapsed{0};
  SolveResult result = SolveResult::budget_exhausted;
  /// Present iff result == sat; indexed by variable - 1.
  std::optional<Gf2Vector> model;
};

struct XorRow {
  std::vector<Var> vars;
  bool rhs = false;
};

struct SatInstance {
  std::size_t num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<XorRow> xors;

  bool satisfied_by(const Gf2Vector& a) const {
    for (const auto& cl : clauses) {
      bool sat = false;
      for (auto l : cl) sat = sat || a.get(static_cast<std::size_t>(std::abs(l)) - 1) == (l > 0);
      if (!sat) return false;
    }
    for (const auto& x : xors) {
      bool parity = false;
      for (auto v : x.vars) parity ^= a.get(v - 1);
      if (parity != x.rhs) return false;
    }
    return true;
  }
};

inline SatInstance to_instance(const CnfFormula& c) { return SatInstance{c.num_vars(), c.clauses(), {}}; }

/// XOR lines follow the formula-module convention: rhs is the parity of negated literals.
/// A variable repeated within a line cancels.
inline SatInstance to_instance(const DimacsProblem& p) {
  SatInstance s{p.num_vars, p.clauses, {}};
  for (const auto& line : p.xors) {
    std::vector<std::uint8_t> odd(p.num_vars + 1, 0);
    XorRow row;
    for (auto l : line) {
      odd[static_cast<std::size_t>(std::abs(l))] ^= 1;
      row.rhs ^= l < 0;
    }
    for (Var v = 1; v <= p.num_vars; ++v) {
      if (odd[v]) row.vars.push_back(v);
    }
    s.xors.push_back(std::move(row));
  }
  return s;
}

/// The nonzero-solution query for a homogeneous formula: its XOR clauses as native rows plus
/// the disjunction of all variables.
inline SatInstance nontrivial_solution_instance(const XorFormula& f) {
  if (!f.homogeneous()) throw std::invalid_argument("nontrivial_solution_instance: formula is not homogeneous");
  SatInstance s;
  s.num_vars = f.num_vars();
  for (const auto& c : f.clauses()) s.xors.push_back({{c.vars[0], c.vars[1], c.vars[2]}, false});
  std::vector<Lit> all;
  for (std::size_t v = 1; v <= f.num_vars(); ++v) all.push_back(static_cast<Lit>(v));
  if (!all.empty()) s.clauses.push_back(std::move(all));
  return s;
}

namespace detail {

class Dpll {
 public:
  Dpll(const SatInstance& inst, const SolveBudget& budget) : inst_(inst), budget_(budget) {
    const std::size_t n = inst.num_vars;
    value_.assign(n + 1, kUnassigned);
    occurs_.resize(n + 1);
    for (std::size_t i = 0; i < inst.clauses.size(); ++i) {
      for (auto l : inst.clauses[i]) {
        const auto v = static_cast<std::size_t>(std::abs(l));
        if (v == 0 || v > n) throw std::invalid_argument("solve: literal out of range");
        occurs_[v].push_back(Ref{false, i});
      }
    }
    for (std::size_t i = 0; i < inst.xors.size(); ++i) {
      for (auto v : inst.xors[i].vars) {
        if (v == 0 || v > n) throw std::invalid_argument("solve: XOR variable out of range");
        occurs_[v].push_back(Ref{true, i});
      }
    }
  }

  SolveStats run() {
    const auto start = std::chrono::steady_clock::now();
    start_ = start;
    stats_.result = search();
    stats_.elapsed = std::chrono::steady_clock::now() - start;
    if (stats_.result == SolveResult::sat) {
      Gf2Vector model(inst_.num_vars);
      for (std::size_t v = 1; v <= inst_.num_vars; ++v) model.set(v - 1, value_[v] == 1);
      if (!inst_.satisfied_by(model)) throw std::logic_error("solve: produced model does not satisfy the input");
      stats_.model = std::move(model);
    }
    return stats_;
  }

 private:
  static constexpr std::int8_t kUnassigned = -1;

  struct Ref {
    bool is_xor;
    std::size_t index;
  };
  struct Level {
    Var var;
    std::size_t trail_start;
    bool flipped;
  };

  bool lit_true(Lit l) const { return value_[static_cast<std::size_t>(std::abs(l))] == (l > 0 ? 1 : 0); }
  bool lit_free(Lit l) const { return value_[static_cast<std::size_t>(std::abs(l))] == kUnassigned; }

  void assign(Var v, bool b) {
    value_[v] = b ? 1 : 0;
    trail_.push_back(v);
  }

  // Returns false on conflict. Implied assignments are pushed on the trail.
  bool check(const Ref& r) {
    if (!r.is_xor) {
      const auto& cl = inst_.clauses[r.index];
      Lit unit = 0;
      int free = 0;
      for (auto l : cl) {
        if (lit_true(l)) return true;
        if (lit_free(l)) {
          ++free;
          unit = l;
        }
      }
      if (free == 0) return false;
      if (free == 1) {
        assign(static_cast<Var>(std::abs(unit)), unit > 0);
        ++stats_.propagations;
      }
      return true;
    }
    const auto& row = inst_.xors[r.index];
    bool parity = false;
    Var last = 0;
    int free = 0;
    for (auto v : row.vars) {
      if (value_[v] == kUnassigned) {
        ++free;
        last = v;
      } else {
        parity ^= value_[v] == 1;
      }
    }
    if (free == 0) return parity == row.rhs;
    if (free == 1) {
      assign(last, parity != row.rhs);
      ++stats_.propagations;
    }
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      const Var v = trail_[qhead_++];
      for (const auto& r : occurs_[v]) {
        if (!check(r)) return false;
      }
    }
    return true;
  }

  bool initial_units() {
    for (std::size_t i = 0; i < inst_.clauses.size(); ++i) {
      if (inst_.clauses[i].empty()) return false;
      if (!check(Ref{false, i})) return false;
    }
    for (std::size_t i = 0; i < inst_.xors.size(); ++i) {
      if (!check(Ref{true, i})) return false;
    }
    return true;
  }

  // Most occurrences among the shortest open constraints; ties go to the lowest variable.
  // Returns 0 when every constraint is already satisfied.
  Var pick_branch() {
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    auto open_size = [&](const Ref& r) -> std::size_t {
      std::size_t free = 0;
      if (!r.is_xor) {
        for (auto l : inst_.clauses[r.index]) {
          if (lit_true(l)) return 0;
          free += lit_free(l);
        }
      } else {
        for (auto v : inst_.xors[r.index].vars) free += value_[v] == kUnassigned;
      }
      return free;
    };
    sizes_c_.resize(inst_.clauses.size());
    sizes_x_.resize(inst_.xors.size());
    for (std::size_t i = 0; i < inst_.clauses.size(); ++i) {
      sizes_c_[i] = open_size(Ref{false, i});
      if (sizes_c_[i] > 0) shortest = std::min(shortest, sizes_c_[i]);
    }
    for (std::size_t i = 0; i < inst_.xors.size(); ++i) {
      sizes_x_[i] = open_size(Ref{true, i});
      if (sizes_x_[i] > 0) shortest = std::min(shortest, sizes_x_[i]);
    }
    if (shortest == std::numeric_limits<std::size_t>::max()) return 0;
    score_.assign(inst_.num_vars + 1, 0);
    for (std::size_t i = 0; i < inst_.clauses.size(); ++i) {
      if (sizes_c_[i] != shortest) continue;
      for (auto l : inst_.clauses[i]) {
        if (lit_free(l)) ++score_[static_cast<std::size_t>(std::abs(l))];
      }
    }
    for (std::size_t i = 0; i < inst_.xors.size(); ++i) {
      if (sizes_x_[i] != shortest) continue;
      for (auto v : inst_.xors[i].vars) {
        if (value_[v] == kUnassigned) ++score_[v];
      }
    }
    Var best = 0;
    for (Var v = 1; v <= inst_.num_vars; ++v) {
      if (value_[v] == kUnassigned && score_[v] > 0 && (best == 0 || score_[v] > score_[best])) best = v;
    }
    return best;
  }

  bool out_of_budget() {
    if (budget_.max_decisions && stats_.decisions >= *budget_.max_decisions) return true;
    if (budget_.max_time && (budget_checks_++ % 64) == 0) {
      return std::chrono::steady_clock::now() - start_ >= *budget_.max_time;
    }
    return false;
  }

  void undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
      value_[trail_.back()] = kUnassigned;
      trail_.pop_back();
    }
    qhead_ = trail_size;
  }

  SolveResult search() {
    if (!initial_units()) return SolveResult::unsat;
    for (;;) {
      if (!propagate()) {
        ++stats_.conflicts;
        // chronological backtracking to the deepest decision whose other branch is untried
        while (!levels_.empty() && levels_.back().flipped) {
          undo_to(levels_.back().trail_start);
          levels_.pop_back();
        }
        if (levels_.empty()) return SolveResult::unsat;
        Level& top = levels_.back();
        const bool tried = value_[top.var] == 1;
        undo_to(top.trail_start);
        top.flipped = true;
        assign(top.var, !tried);
        continue;
      }
      const Var v = pick_branch();
      if (v == 0) {
        for (std::size_t u = 1; u <= inst_.num_vars; ++u) {
          if (value_[u] == kUnassigned) value_[u] = 0;
        }
        return SolveResult::sat;
      }
      if (out_of_budget()) return SolveResult::budget_exhausted;
      ++stats_.decisions;
      levels_.push_back(Level{v, trail_.size(), false});
      assign(v, false);
    }
  }

  const SatInstance& inst_;
  SolveBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<Ref>> occurs_;
  std::vector<Var> trail_;
  std::size_t qhead_ = 0;
  std::uint64_t budget_checks_ = 0;
  std::vector<Level> levels_;
  std::vector<std::size_t> sizes_c_, sizes_x_, score_;
  SolveStats stats_;
};

/// Replaces the XOR rows with their reduced echelon rows; nullopt if they are inconsistent.
inline std::optional<SatInstance> eliminate_xors(const SatInstance& in) {
  SatInstance out{in.num_vars, in.clauses, {}};
  if (in.xors.empty()) return out;
  Gf2Matrix m(in.xors.size(), in.num_vars);
  Gf2Vector b(in.xors.size());
  for (std::size_t r = 0; r < in.xors.size(); ++r) {
    for (auto v : in.xors[r].vars) {
      if (v == 0 || v > in.num_vars) throw std::invalid_argument("solve: XOR variable out of range");
      m.set(r, v - 1, !m.get(r, v - 1));
    }
    b.set(r, in.xors[r].rhs);
  }
  const EchelonForm ef = reduce(m, b);
  if (ef.inconsistent) return std::nullopt;
  for (std::size_t r = 0; r < ef.rank(); ++r) {
    XorRow row;
    row.rhs = ef.rhs.get(r);
    for (std::size_t c = 0; c < in.num_vars; ++c) {
      if (ef.reduced.get(r, c)) row.vars.push_back(static_cast<Var>(c + 1));
    }
    out.xors.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

/// Decides the instance. With use_gauss the XOR rows are first brought to reduced echelon form
/// (an inconsistent system is UNSAT with zero decisions) and DPLL runs on the remainder.
inline SolveStats solve(const SatInstance& input, bool use_gauss, const SolveBudget& budget = {}) {
  if (!use_gauss) return detail::Dpll(input, budget).run();
  const auto start = std::chrono::steady_clock::now();
  auto reduced = detail::eliminate_xors(input);
  if (!reduced) {
    SolveStats s;
    s.result = SolveResult::unsat;
    s.elapsed = std::chrono::steady_clock::now() - start;
    return s;
  }
  SolveStats s = detail::Dpll(*reduced, budget).run();
  s.elapsed = std::chrono::steady_clock::now() - start;
  if (s.model && !input.satisfied_by(*s.model)) throw std::logic_error("solve: Gaussian model fails the input");
  return s;
}

inline SolveStats solve(const CnfFormula& cnf, bool use_gauss, const SolveBudget& budget = {}) {
  return solve(to_instance(cnf), use_gauss, budget);
}

struct GaussGap {
  /// (decisions without Gauss + 1) / (decisions with Gauss + 1); +inf when the run without
  /// Gauss exhausts its budget, NaN when the Gaussian run does.
  double ratio = 1.0;
  SolveStats with_gauss;
  SolveStats without_gauss;
};

inline GaussGap gauss_ratio(const XorFormula& f, const SolveBudget& budget) {
  if (!is_uniquely_satisfiable(f)) throw std::invalid_argument("gauss_ratio: formula is not uniquely satisfiable");
  const SatInstance inst = nontrivial_solution_instance(f);
  GaussGap gap;
  gap.with_gauss = solve(inst, true, budget);
  gap.without_gauss = solve(inst, false, budget);
  if (gap.with_gauss.result == SolveResult::budget_exhausted) {
    gap.ratio = std::numeric_limits<double>::quiet_NaN();
  } else if (gap.without_gauss.result == SolveResult::budget_exhausted) {
    gap.ratio = std::numeric_limits<double>::infinity();
  } else {
    gap.ratio = static_cast<double>(gap.without_gauss.decisions + 1) / static_cast<double>(gap.with_gauss.decisions + 1);
  }
  return gap;
}

}  // namespace hardgi
