#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clothgrasp/raster.hpp"

namespace clothgrasp {

/// Exact nearest-neighbour queries over integer pixel coordinates.
///
/// Points are bucketed into a uniform grid; queries scan rings of cells
/// outward until the next ring cannot hold anything closer than the current
/// k-th result. Squared distances are exact integers, so results equal a
/// linear scan ordered by (squared distance, row-major position, input index).
class NeighborIndex {
 public:
  NeighborIndex() = default;
  explicit NeighborIndex(std::span<const Pixel> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Pixel>& points() const noexcept { return points_; }

  /// Index of the closest point. Throws kDegenerateInput on an empty index.
  std::size_t Nearest(Pixel query) const;

  /// Indices of the min(k, size()) closest points, closest first.
  void KNearest(Pixel query, std::size_t k, std::vector<std::size_t>& out) const;
  std::vector<std::size_t> KNearest(Pixel query, std::size_t k) const;

 private:
  struct Key {
    std::int64_t d2;
    int y;
    int x;
    std::uint32_t index;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.d2 != b.d2) return a.d2 < b.d2;
      if (a.y != b.y) return a.y < b.y;
      if (a.x != b.x) return a.x < b.x;
      return a.index < b.index;
    }
  };

  int CellCoord(int v, int origin) const noexcept;

  std::vector<Pixel> points_;
  int origin_x_ = 0;
  int origin_y_ = 0;
  int cell_size_ = 1;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint32_t> cell_start_;  // cols_ * rows_ + 1 offsets
  std::vector<std::uint32_t> entries_;     // point indices grouped by cell
  std::vector<int> entry_x_;
  std::vector<int> entry_y_;
};

}  // namespace clothgrasp
