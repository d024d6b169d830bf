#include "clothgrasp/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clothgrasp/errors.hpp"

namespace clothgrasp {
namespace {

constexpr double kPointsPerCell = 4.0;

int FloorDiv(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

NeighborIndex::NeighborIndex(std::span<const Pixel> points) : points_(points.begin(), points.end()) {
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    Throw(ErrorKind::kParameter, "too many points for the neighbour index");
  }
  if (points_.empty()) return;
  int min_x = points_[0].x, max_x = points_[0].x;
  int min_y = points_[0].y, max_y = points_[0].y;
  for (const Pixel& p : points_) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double area = static_cast<double>(max_x - min_x + 1) * static_cast<double>(max_y - min_y + 1);
  cell_size_ = std::max(1, static_cast<int>(std::ceil(
                               std::sqrt(kPointsPerCell * area / static_cast<double>(points_.size())))));
  origin_x_ = min_x;
  origin_y_ = min_y;
  cols_ = (max_x - min_x) / cell_size_ + 1;
  rows_ = (max_y - min_y) / cell_size_ + 1;

  const std::size_t cells = static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_);
  std::vector<std::uint32_t> counts(cells + 1, 0);
  std::vector<std::uint32_t> cell_of(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int cx = (points_[i].x - origin_x_) / cell_size_;
    const int cy = (points_[i].y - origin_y_) / cell_size_;
    cell_of[i] = static_cast<std::uint32_t>(cy * cols_ + cx);
    ++counts[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) counts[c + 1] += counts[c];
  cell_start_ = counts;
  entries_.resize(points_.size());
  std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    entries_[cursor[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }
  entry_x_.resize(points_.size());
  entry_y_.resize(points_.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    entry_x_[e] = points_[entries_[e]].x;
    entry_y_[e] = points_[entries_[e]].y;
  }
}

int NeighborIndex::CellCoord(int v, int origin) const noexcept {
  return FloorDiv(v - origin, cell_size_);
}

std::size_t NeighborIndex::Nearest(Pixel query) const {
  if (points_.empty()) Throw(ErrorKind::kDegenerateInput, "nearest-neighbour query on an empty set");
  const int qcx = CellCoord(query.x, origin_x_);
  const int qcy = CellCoord(query.y, origin_y_);
  const int max_ring = std::max({std::abs(qcx), std::abs(qcx - (cols_ - 1)), std::abs(qcy),
                                 std::abs(qcy - (rows_ - 1))});
  bool found = false;
  Key best{};
  const auto scan = [&](int cx, int cy) {
    if (cx < 0 || cy < 0 || cx >= cols_ || cy >= rows_) return;
    const std::size_t cell = static_cast<std::size_t>(cy) * static_cast<std::size_t>(cols_) +
                             static_cast<std::size_t>(cx);
    for (std::uint32_t e = cell_start_[cell]; e < cell_start_[cell + 1]; ++e) {
      const std::int64_t dx = entry_x_[e] - query.x;
      const std::int64_t dy = entry_y_[e] - query.y;
      const Key key{dx * dx + dy * dy, entry_y_[e], entry_x_[e], entries_[e]};
      if (!found || key < best) {
        best = key;
        found = true;
      }
    }
  };
  for (int r = 0; r <= max_ring; ++r) {
    if (r == 0) {
      scan(qcx, qcy);
    } else {
      for (int cx = qcx - r; cx <= qcx + r; ++cx) {
        scan(cx, qcy - r);
        scan(cx, qcy + r);
      }
      for (int cy = qcy - r + 1; cy <= qcy + r - 1; ++cy) {
        scan(qcx - r, cy);
        scan(qcx + r, cy);
      }
    }
    const std::int64_t bound = static_cast<std::int64_t>(r) * cell_size_;
    if (found && best.d2 <= bound * bound) break;
  }
  return best.index;
}

void NeighborIndex::KNearest(Pixel query, std::size_t k, std::vector<std::size_t>& out) const {
  out.clear();
  if (k == 0 || points_.empty()) return;
  k = std::min(k, points_.size());
  const int qcx = CellCoord(query.x, origin_x_);
  const int qcy = CellCoord(query.y, origin_y_);
  const int max_ring = std::max({std::abs(qcx), std::abs(qcx - (cols_ - 1)), std::abs(qcy),
                                 std::abs(qcy - (rows_ - 1))});
  std::vector<Key> heap;
  heap.reserve(k + 1);
  const auto scan = [&](int cx, int cy) {
    if (cx < 0 || cy < 0 || cx >= cols_ || cy >= rows_) return;
    const std::size_t cell = static_cast<std::size_t>(cy) * static_cast<std::size_t>(cols_) +
                             static_cast<std::size_t>(cx);
    for (std::uint32_t e = cell_start_[cell]; e < cell_start_[cell + 1]; ++e) {
      const std::int64_t dx = entry_x_[e] - query.x;
      const std::int64_t dy = entry_y_[e] - query.y;
      const Key key{dx * dx + dy * dy, entry_y_[e], entry_x_[e], entries_[e]};
      if (heap.size() < k) {
        heap.push_back(key);
        std::push_heap(heap.begin(), heap.end());
      } else if (key < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = key;
        std::push_heap(heap.begin(), heap.end());
      }
    }
  };
  for (int r = 0; r <= max_ring; ++r) {
    if (r == 0) {
      scan(qcx, qcy);
    } else {
      for (int cx = qcx - r; cx <= qcx + r; ++cx) {
        scan(cx, qcy - r);
        scan(cx, qcy + r);
      }
      for (int cy = qcy - r + 1; cy <= qcy + r - 1; ++cy) {
        scan(qcx - r, cy);
        scan(qcx + r, cy);
      }
    }
    // Anything in ring r + 1 is strictly farther than r * cell_size.
    const std::int64_t bound = static_cast<std::int64_t>(r) * cell_size_;
    if (heap.size() == k && heap.front().d2 <= bound * bound) break;
  }
  std::sort_heap(heap.begin(), heap.end());
  out.reserve(heap.size());
  for (const Key& key : heap) out.push_back(key.index);
}

std::vector<std::size_t> NeighborIndex::KNearest(Pixel query, std::size_t k) const {
  std::vector<std::size_t> out;
  KNearest(query, k, out);
  return out;
}

}  // namespace clothgrasp
