#pragma once

// 3-XOR formulas viewed as linear systems over GF(2), plus their CNF and DIMACS forms.
//
// Semantics: a clause is satisfied when an even number of its literals are true, so a clause
// over variables (x, y, z) is the equation x + y + z = rhs where rhs is the parity of the
// number of negated literals.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardgi/gf2.hpp"

namespace hardgi {

/// Variables are 1-based, matching DIMACS numbering.
using Var = std::uint32_t;
using Lit = std::int32_t;

struct XorClause {
  std::array<Var, 3> vars{};
  bool rhs = false;

  friend auto operator<=>(const XorClause&, const XorClause&) = default;
};

struct RawXorClause {
  std::array<Var, 3> vars{};
  bool rhs = false;
};

/// Whether make_formula accepts two clauses on the same variable set with different rhs.
enum class Contradictions { reject, keep };

class XorFormula {
 public:
  XorFormula() = default;

  std::size_t num_vars() const { return n_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<XorClause>& clauses() const { return clauses_; }

  bool homogeneous() const {
    return std::none_of(clauses_.begin(), clauses_.end(), [](const XorClause& c) { return c.rhs; });
  }

  /// `assignment` is indexed by variable - 1.
  bool satisfied_by(const Gf2Vector& assignment) const {
    if (assignment.size() != n_) throw std::invalid_argument("XorFormula: assignment length mismatch");
    for (const auto& c : clauses_) {
      const bool parity = assignment.get(c.vars[0] - 1) ^ assignment.get(c.vars[1] - 1) ^
                          assignment.get(c.vars[2] - 1);
      if (parity != c.rhs) return false;
    }
    return true;
  }

  friend bool operator==(const XorFormula&, const XorFormula&) = default;

 private:
  friend XorFormula make_formula(std::size_t, const std::vector<RawXorClause>&, Contradictions);
  std::size_t n_ = 0;
  std::vector<XorClause> clauses_;
};

/// Canonicalizes and validates raw clauses: each triple is sorted, equivalent clauses are
/// merged, and the result is stored in lexicographic (v1, v2, v3, rhs) order.
inline XorFormula make_formula(std::size_t n, const std::vector<RawXorClause>& raw,
                               Contradictions policy = Contradictions::reject) {
  XorFormula f;
  f.n_ = n;
  f.clauses_.reserve(raw.size());
  for (const auto& r : raw) {
    XorClause c{r.vars, r.rhs};
    std::sort(c.vars.begin(), c.vars.end());
    for (auto v : c.vars) {
      if (v < 1 || v > n) {
        throw std::invalid_argument("make_formula: variable " + std::to_string(v) + " outside [1, " +
                                    std::to_string(n) + "]");
      }
    }
    if (c.vars[0] == c.vars[1] || c.vars[1] == c.vars[2]) {
      throw std::invalid_argument("make_formula: repeated variable within a clause");
    }
    f.clauses_.push_back(c);
  }
  std::sort(f.clauses_.begin(), f.clauses_.end());
  f.clauses_.erase(std::unique(f.clauses_.begin(), f.clauses_.end()), f.clauses_.end());
  if (policy == Contradictions::reject) {
    for (std::size_t i = 1; i < f.clauses_.size(); ++i) {
      if (f.clauses_[i].vars == f.clauses_[i - 1].vars) {
        const auto& v = f.clauses_[i].vars;
        throw std::invalid_argument("make_formula: contradictory clauses on {" + std::to_string(v[0]) +
                                    "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + "}");
      }
    }
  }
  return f;
}

inline XorFormula homogeneous_companion(const XorFormula& f) {
  std::vector<RawXorClause> raw;
  raw.reserve(f.num_clauses());
  for (const auto& c : f.clauses()) raw.push_back({c.vars, false});
  return make_formula(f.num_vars(), raw, Contradictions::keep);
}

/// A formula plus the unit equation X_var = value.
struct PinnedSystem {
  XorFormula base;
  Var var = 1;
  bool value = true;
};

inline PinnedSystem pin(const XorFormula& f, Var i, bool value) {
  if (i < 1 || i > f.num_vars()) {
    throw std::out_of_range("pin: variable " + std::to_string(i) + " outside [1, " +
                            std::to_string(f.num_vars()) + "]");
  }
  return PinnedSystem{f, i, value};
}

struct LinearSystem {
  Gf2Matrix matrix;
  Gf2Vector rhs;
};

/// One row per clause in canonical order; column j holds variable j + 1.
inline LinearSystem to_matrix(const XorFormula& f) {
  LinearSystem s{Gf2Matrix(f.num_clauses(), f.num_vars()), Gf2Vector(f.num_clauses())};
  for (std::size_t r = 0; r < f.num_clauses(); ++r) {
    const auto& c = f.clauses()[r];
    for (auto v : c.vars) s.matrix.set(r, v - 1, true);
    s.rhs.set(r, c.rhs);
  }
  return s;
}

/// The pinned unit equation becomes a final width-1 row.
inline LinearSystem to_matrix(const PinnedSystem& p) {
  LinearSystem s = to_matrix(p.base);
  Gf2Vector unit(p.base.num_vars());
  unit.set(p.var - 1, true);
  s.matrix.push_row(unit);
  Gf2Vector rhs(s.rhs.size() + 1);
  for (std::size_t i = 0; i < s.rhs.size(); ++i) rhs.set(i, s.rhs.get(i));
  rhs.set(s.rhs.size(), p.value);
  s.rhs = std::move(rhs);
  return s;
}

inline bool is_satisfiable(const PinnedSystem& p) {
  const LinearSystem s = to_matrix(p);
  return solve(s.matrix, s.rhs).has_value();
}

inline bool is_uniquely_satisfiable(const XorFormula& f) {
  if (!f.homogeneous()) throw std::invalid_argument("is_uniquely_satisfiable: formula is not homogeneous");
  return rank(to_matrix(f).matrix) == f.num_vars();
}

class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::size_t n, std::vector<std::vector<Lit>> clauses) : n_(n), clauses_(std::move(clauses)) {
    for (const auto& cl : clauses_) {
      if (cl.empty()) throw std::invalid_argument("CnfFormula: empty clause");
      for (auto l : cl) {
        if (l == 0 || static_cast<std::size_t>(std::abs(l)) > n_) {
          throw std::invalid_argument("CnfFormula: literal " + std::to_string(l) + " out of range");
        }
      }
    }
  }

  std::size_t num_vars() const { return n_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }

  bool satisfied_by(const Gf2Vector& assignment) const {
    for (const auto& cl : clauses_) {
      const bool sat = std::any_of(cl.begin(), cl.end(), [&](Lit l) {
        return assignment.get(static_cast<std::size_t>(std::abs(l)) - 1) == (l > 0);
      });
      if (!sat) return false;
    }
    return true;
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<Lit>> clauses_;
};

/// Four parity clauses per XOR clause plus one clause holding every positive literal;
/// satisfiable exactly when f has a nonzero solution.
inline CnfFormula nontrivial_solution_formula(const XorFormula& f) {
  if (!f.homogeneous()) throw std::invalid_argument("nontrivial_solution_formula: formula is not homogeneous");
  std::vector<std::vector<Lit>> out;
  out.reserve(4 * f.num_clauses() + 1);
  for (const auto& c : f.clauses()) {
    const Lit x = static_cast<Lit>(c.vars[0]);
    const Lit y = static_cast<Lit>(c.vars[1]);
    const Lit z = static_cast<Lit>(c.vars[2]);
    out.push_back({-x, -y, -z});
    out.push_back({-x, y, z});
    out.push_back({x, -y, z});
    out.push_back({x, y, -z});
  }
  std::vector<Lit> all;
  for (std::size_t v = 1; v <= f.num_vars(); ++v) all.push_back(static_cast<Lit>(v));
  if (!all.empty()) out.push_back(std::move(all));
  return CnfFormula(f.num_vars(), std::move(out));
}

// ---------------------------------------------------------------------------------------------
// DIMACS

/// A parsed DIMACS file: ordinary clauses and "x"-prefixed XOR lines, in file order.
struct DimacsProblem {
  std::size_t num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<std::vector<Lit>> xors;
};

inline DimacsProblem parse_dimacs(const std::string& text) {
  DimacsProblem p;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t declared = 0;
  std::size_t line_no = 0;
  std::vector<Lit> pending;
  bool pending_xor = false;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("DIMACS line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      if (have_header) fail("duplicate header");
      if (!(ls >> fmt >> p.num_vars >> declared) || fmt != "cnf") fail("malformed header");
      have_header = true;
      continue;
    }
    if (!have_header) fail("clause before header");
    if (pending.empty() && (tok == "x" || tok.rfind('x', 0) == 0)) {
      pending_xor = true;
      tok = tok.substr(1);
      if (tok.empty() && !(ls >> tok)) fail("empty XOR line");
    }
    do {
      char* end = nullptr;
      const long v = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') fail("bad literal '" + tok + "'");
      if (v == 0) {
        if (pending.empty()) fail("empty clause");
        (pending_xor ? p.xors : p.clauses).push_back(std::move(pending));
        pending.clear();
        pending_xor = false;
        continue;
      }
      if (static_cast<std::size_t>(std::labs(v)) > p.num_vars) fail("literal " + tok + " exceeds header");
      pending.push_back(static_cast<Lit>(v));
    } while (ls >> tok);
  }
  if (!have_header) throw std::runtime_error("DIMACS: missing header");
  if (!pending.empty()) throw std::runtime_error("DIMACS: unterminated clause at end of input");
  if (p.clauses.size() + p.xors.size() != declared) {
    throw std::runtime_error("DIMACS: header declares " + std::to_string(declared) + " clauses, found " +
                             std::to_string(p.clauses.size() + p.xors.size()));
  }
  return p;
}

inline std::string to_dimacs(const CnfFormula& c) {
  std::ostringstream out;
  out << "p cnf " << c.num_vars() << ' ' << c.num_clauses() << '\n';
  for (const auto& cl : c.clauses()) {
    for (auto l : cl) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

/// XOR-extension DIMACS. rhs 1 is written by negating the smallest variable.
inline std::string to_xor_dimacs(const XorFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const auto& c : f.clauses()) {
    out << "x " << (c.rhs ? "-" : "") << c.vars[0] << ' ' << c.vars[1] << ' ' << c.vars[2] << " 0\n";
  }
  return out.str();
}

inline CnfFormula cnf_from_dimacs(const std::string& text) {
  DimacsProblem p = parse_dimacs(text);
  if (!p.xors.empty()) throw std::runtime_error("DIMACS: XOR lines in a plain CNF input");
  return CnfFormula(p.num_vars, std::move(p.clauses));
}

inline XorFormula xor_formula_from_dimacs(const std::string& text,
                                          Contradictions policy = Contradictions::reject) {
  const DimacsProblem p = parse_dimacs(text);
  if (!p.clauses.empty()) throw std::runtime_error("XOR DIMACS: unexpected plain clause");
  std::vector<RawXorClause> raw;
  for (const auto& x : p.xors) {
    if (x.size() != 3) throw std::runtime_error("XOR DIMACS: clause width " + std::to_string(x.size()) + " != 3");
    RawXorClause r;
    bool parity = false;
    for (std::size_t k = 0; k < 3; ++k) {
      r.vars[k] = static_cast<Var>(std::abs(x[k]));
      parity ^= x[k] < 0;
    }
    r.rhs = parity;
    raw.push_back(r);
  }
  return make_formula(p.num_vars, raw, policy);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed: " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline XorFormula load_xor_formula(const std::string& path) {
  try {
    return xor_formula_from_dimacs(read_text_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void save_xor_formula(const std::string& path, const XorFormula& f) { write_text_file(path, to_xor_dimacs(f)); }

}  // namespace hardgi
