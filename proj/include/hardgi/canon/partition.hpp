#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace hardgi {

/// A partition of {0..n-1}. Cell ids are dense and ordered by the smallest element of each cell.
class Partition {
 public:
  Partition() = default;

  /// Elements with equal labels share a cell.
  template <class Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    p.cell_of_.resize(labels.size());
    std::map<Label, std::uint32_t> ids;
    for (std::size_t e = 0; e < labels.size(); ++e) {
      auto [it, fresh] = ids.emplace(labels[e], static_cast<std::uint32_t>(ids.size()));
      p.cell_of_[e] = it->second;
    }
    p.cells_ = ids.size();
    return p;
  }
  template <class Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  static Partition unit(std::size_t n) { return from_labels(std::vector<std::uint32_t>(n, 0)); }
  static Partition discrete(std::size_t n) {
    std::vector<std::uint32_t> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<std::uint32_t>(i);
    return from_labels(l);
  }

  std::size_t element_count() const { return cell_of_.size(); }
  std::size_t cell_count() const { return cells_; }
  std::uint32_t cell_of(std::size_t e) const { return cell_of_[e]; }
  const std::vector<std::uint32_t>& labels() const { return cell_of_; }
  bool same_cell(std::size_t a, std::size_t b) const { return cell_of_[a] == cell_of_[b]; }
  bool is_discrete() const { return cells_ == cell_of_.size(); }

  std::vector<std::vector<std::uint32_t>> cells() const {
    std::vector<std::vector<std::uint32_t>> out(cells_);
    for (std::size_t e = 0; e < cell_of_.size(); ++e) out[cell_of_[e]].push_back(static_cast<std::uint32_t>(e));
    return out;
  }

  /// True when every cell of *this lies inside a cell of `coarser`.
  bool refines(const Partition& coarser) const {
    if (coarser.element_count() != element_count()) throw std::invalid_argument("Partition::refines: size mismatch");
    std::vector<std::int64_t> image(cells_, -1);
    for (std::size_t e = 0; e < cell_of_.size(); ++e) {
      auto& slot = image[cell_of_[e]];
      if (slot < 0) {
        slot = coarser.cell_of_[e];
      } else if (slot != coarser.cell_of_[e]) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint32_t> cell_of_;
  std::size_t cells_ = 0;
};

}  // namespace hardgi
