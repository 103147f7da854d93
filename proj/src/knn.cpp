#include "planeseg/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace planeseg {

KnnGrid::KnnGrid(std::span<const Point3> points) : points_(points) {
  const std::size_t n = points.size();
  if (n == 0) {
    cell_start_.assign(2, 0);
    return;
  }
  Point3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  min_ = lo;
  const Point3 ext = hi - lo;
  const double longest = std::max(ext.maxCoeff(), 1e-9);
  double volume = 1.0;
  for (int a = 0; a < 3; ++a) volume *= std::max(ext[a], 1e-3 * longest);
  cell_ = std::cbrt(volume / static_cast<double>(n));
  auto dims_for = [&](double s) {
    Eigen::Vector3i d;
    for (int a = 0; a < 3; ++a) d[a] = static_cast<int>(std::floor(ext[a] / s)) + 1;
    return d;
  };
  // Keep the grid at most a few cells per point.
  for (;;) {
    dims_ = dims_for(cell_);
    const double cells = static_cast<double>(dims_.x()) * dims_.y() * dims_.z();
    if (cells <= 3.0 * static_cast<double>(n) + 8.0) break;
    cell_ *= 1.25;
  }

  const std::size_t n_cells = static_cast<std::size_t>(dims_.x()) * dims_.y() * dims_.z();
  std::vector<std::uint32_t> cell_id(n);
  cell_start_.assign(n_cells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cell_of(points[i]);
    cell_id[i] = static_cast<std::uint32_t>(flat(c.x(), c.y(), c.z()));
    ++cell_start_[cell_id[i] + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) cell_start_[c + 1] += cell_start_[c];
  cell_points_.resize(n);
  std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) cell_points_[cursor[cell_id[i]]++] = static_cast<PointIndex>(i);
}

Eigen::Vector3i KnnGrid::cell_of(const Point3& p) const {
  Eigen::Vector3i c;
  for (int a = 0; a < 3; ++a) {
    const int v = static_cast<int>(std::floor((p[a] - min_[a]) / cell_));
    c[a] = std::clamp(v, 0, dims_[a] - 1);
  }
  return c;
}

void KnnGrid::query(const Point3& q, std::size_t k, std::vector<PointIndex>& out) const {
  out.clear();
  k = std::min(k, points_.size());
  if (k == 0) return;

  using Entry = std::pair<double, PointIndex>;
  std::priority_queue<Entry> heap;  // max-heap on (distance, index)
  auto visit = [&](int x, int y, int z) {
    const std::size_t c = flat(x, y, z);
    for (std::uint32_t j = cell_start_[c]; j < cell_start_[c + 1]; ++j) {
      const PointIndex idx = cell_points_[j];
      const Entry e{(points_[idx] - q).squaredNorm(), idx};
      if (heap.size() < k) {
        heap.push(e);
      } else if (e < heap.top()) {
        heap.pop();
        heap.push(e);
      }
    }
  };

  const Eigen::Vector3i c = cell_of(q);
  const int r_max = dims_.maxCoeff();
  for (int r = 0; r <= r_max; ++r) {
    const int x0 = c.x() - r, x1 = c.x() + r;
    const int y0 = c.y() - r, y1 = c.y() + r;
    const int z0 = c.z() - r, z1 = c.z() + r;
    for (int x = std::max(x0, 0); x <= std::min(x1, dims_.x() - 1); ++x) {
      const bool x_face = x == x0 || x == x1;
      for (int y = std::max(y0, 0); y <= std::min(y1, dims_.y() - 1); ++y) {
        if (x_face || y == y0 || y == y1) {
          for (int z = std::max(z0, 0); z <= std::min(z1, dims_.z() - 1); ++z) visit(x, y, z);
        } else {
          if (z0 >= 0) visit(x, y, z0);
          if (z1 < dims_.z() && z1 != z0) visit(x, y, z1);
        }
      }
    }
    if (heap.size() < k) continue;
    // Distance from q to the nearest face of the scanned block that still
    // has unscanned cells beyond it.
    double bound = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (c[a] - r > 0) bound = std::min(bound, q[a] - (min_[a] + (c[a] - r) * cell_));
      if (c[a] + r < dims_[a] - 1) bound = std::min(bound, min_[a] + (c[a] + r + 1) * cell_ - q[a]);
    }
    if (bound == std::numeric_limits<double>::infinity()) break;
    if (bound > 0.0 && heap.top().first < bound * bound) break;
  }

  out.resize(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
}

}  // namespace planeseg
