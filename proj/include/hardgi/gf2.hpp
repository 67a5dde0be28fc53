#pragma once

// Dense bit-packed linear algebra over the two-element field.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hardgi {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  /// Parses a string of '0'/'1' characters, leftmost character is index 0.
  static Gf2Vector from_string(std::string_view bits) {
    Gf2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("Gf2Vector: invalid bit character");
      }
    }
    return v;
  }

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  bool is_zero() const {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }
  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  Gf2Vector& operator^=(const Gf2Vector& o) {
    if (o.len_ != len_) throw std::invalid_argument("Gf2Vector: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * stride_, 0) {}

  /// Builds a matrix from row strings such as {"1110", "0111"}; all rows must share a length.
  static Gf2Matrix from_rows(const std::vector<std::string>& rows, std::size_t cols) {
    Gf2Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("Gf2Matrix: ragged row");
      for (std::size_t c = 0; c < cols; ++c) {
        if (rows[r][c] == '1') m.set(r, c, true);
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value) {
    auto& w = bits_[r * stride_ + c / kWordBits];
    const std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  /// Adds row `src` into row `dst`.
  void add_row(std::size_t dst, std::size_t src) {
    for (std::size_t k = 0; k < stride_; ++k) bits_[dst * stride_ + k] ^= bits_[src * stride_ + k];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < stride_; ++k) std::swap(bits_[a * stride_ + k], bits_[b * stride_ + k]);
  }

  Gf2Vector row(std::size_t r) const {
    Gf2Vector v(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) v.set(c, true);
    }
    return v;
  }

  /// Appends a row; the vector length must equal cols().
  void push_row(const Gf2Vector& v) {
    if (v.size() != cols_) throw std::invalid_argument("Gf2Matrix::push_row: length mismatch");
    bits_.insert(bits_.end(), v.words().begin(), v.words().end());
    ++rows_;
  }

  Gf2Vector multiply(const Gf2Vector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Gf2Matrix::multiply: dimension mismatch");
    Gf2Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < stride_; ++k) acc ^= bits_[r * stride_ + k] & x.words()[k];
      if (std::popcount(acc) & 1) out.set(r, true);
    }
    return out;
  }

  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Reduced row echelon form of a matrix, optionally carrying an augmented right-hand side.
struct EchelonForm {
  Gf2Matrix reduced;
  Gf2Vector rhs;
  /// pivot_cols[r] is the pivot column of row r for r < rank.
  std::vector<std::size_t> pivot_cols;
  /// True when some zero row carries a nonzero right-hand side.
  bool inconsistent = false;

  std::size_t rank() const { return pivot_cols.size(); }
};

/// Gauss-Jordan elimination; the pivot of each column is the first remaining row with that bit set.
inline EchelonForm reduce(Gf2Matrix m, Gf2Vector b) {
  if (b.size() != m.rows()) throw std::invalid_argument("gf2 reduce: rhs length must equal row count");
  EchelonForm out;
  std::size_t next = 0;
  for (std::size_t c = 0; c < m.cols() && next < m.rows(); ++c) {
    std::size_t piv = next;
    while (piv < m.rows() && !m.get(piv, c)) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(next, piv);
    if (b.get(next) != b.get(piv)) {
      b.flip(next);
      b.flip(piv);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != next && m.get(r, c)) {
        m.add_row(r, next);
        if (b.get(next)) b.flip(r);
      }
    }
    out.pivot_cols.push_back(c);
    ++next;
  }
  for (std::size_t r = next; r < m.rows(); ++r) {
    if (b.get(r)) out.inconsistent = true;
  }
  out.reduced = std::move(m);
  out.rhs = std::move(b);
  return out;
}

inline EchelonForm reduce(const Gf2Matrix& m) { return reduce(m, Gf2Vector(m.rows())); }

inline std::size_t rank(const Gf2Matrix& m) { return reduce(m).rank(); }

/// Null-space basis: one vector per free column (ascending), with that column set and pivot
/// columns read off the reduced echelon form.
inline std::vector<Gf2Vector> kernel_basis(const Gf2Matrix& m) {
  const EchelonForm ef = reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ef.pivot_cols) is_pivot[c] = true;
  std::vector<Gf2Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Gf2Vector v(m.cols());
    v.set(f, true);
    for (std::size_t r = 0; r < ef.rank(); ++r) {
      if (ef.reduced.get(r, f)) v.set(ef.pivot_cols[r], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Canonical solution of m·x = b with all free variables zero, or nullopt if inconsistent.
inline std::optional<Gf2Vector> solve(const Gf2Matrix& m, const Gf2Vector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("gf2 solve: rhs length must equal row count");
  const EchelonForm ef = reduce(m, b);
  if (ef.inconsistent) return std::nullopt;
  Gf2Vector x(m.cols());
  for (std::size_t r = 0; r < ef.rank(); ++r) x.set(ef.pivot_cols[r], ef.rhs.get(r));
  return x;
}

}  // namespace hardgi
