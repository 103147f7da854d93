#pragma once

#include "planeseg/types.hpp"

#include <span>
#include <vector>

namespace planeseg {

/**
 * @brief Exact k-nearest-neighbour search over a uniform grid.
 *
 * Points are bucketed into cubic cells; a query scans cell shells of
 * growing Chebyshev radius until the k-th best distance is no larger than
 * the distance to any unscanned cell. Results are exact, ordered by
 * (squared distance, index).
 */
class KnnGrid {
 public:
  explicit KnnGrid(std::span<const Point3> points);

  /// Fills `out` with the min(k, size) nearest indices; a point of the set
  /// is its own nearest neighbour.
  void query(const Point3& q, std::size_t k, std::vector<PointIndex>& out) const;

  double cell_size() const noexcept { return cell_; }

 private:
  Eigen::Vector3i cell_of(const Point3& p) const;
  std::size_t flat(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * dims_.y() + y) * dims_.x() + x;
  }

  std::span<const Point3> points_;
  Point3 min_ = Point3::Zero();
  double cell_ = 1.0;
  Eigen::Vector3i dims_{1, 1, 1};
  std::vector<std::uint32_t> cell_start_;
  std::vector<PointIndex> cell_points_;
};

}  // namespace planeseg
