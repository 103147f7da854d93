#include "planeseg/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace planeseg {

Eigen::Vector3i voxel_key(const Point3& p, double voxel) {
  return {static_cast<int>(std::floor(p.x() / voxel)),
          static_cast<int>(std::floor(p.y() / voxel)),
          static_cast<int>(std::floor(p.z() / voxel))};
}

std::vector<std::vector<PointIndex>> voxel_groups(const LabeledCloud& cloud, double voxel) {
  if (!(voxel > 0.0)) throw Error("voxel size must be positive");
  const std::size_t n = cloud.size();
  std::vector<Eigen::Vector3i> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = voxel_key(cloud.points[i], voxel);

  std::vector<PointIndex> order(n);
  std::iota(order.begin(), order.end(), PointIndex{0});
  auto less = [&](PointIndex a, PointIndex b) {
    const auto& ka = keys[a];
    const auto& kb = keys[b];
    return std::tie(ka.x(), ka.y(), ka.z(), a) < std::tie(kb.x(), kb.y(), kb.z(), b);
  };
  std::sort(order.begin(), order.end(), less);

  std::vector<std::vector<PointIndex>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || keys[order[i]] != keys[order[i - 1]]) groups.emplace_back();
    groups.back().push_back(order[i]);
  }
  return groups;
}

LabeledCloud voxel_downsample(const LabeledCloud& cloud, double voxel) {
  const auto groups = voxel_groups(cloud, voxel);
  LabeledCloud out;
  out.points.reserve(groups.size());
  if (cloud.has_labels()) out.labels.emplace().reserve(groups.size());
  for (const auto& g : groups) {
    Point3 sum = Point3::Zero();
    std::size_t v_count = 0;
    for (PointIndex i : g) {
      sum += cloud.points[i];
      if (cloud.has_labels()) v_count += (*cloud.labels)[i] == Category::V;
    }
    out.points.push_back(sum / static_cast<double>(g.size()));
    if (cloud.has_labels()) {
      out.labels->push_back(2 * v_count > g.size() ? Category::V : Category::H);
    }
  }
  return out;
}

std::vector<PointIndex> furthest_point_sample_indices(const LabeledCloud& cloud, std::size_t n,
                                                      std::uint64_t seed) {
  const std::size_t total = cloud.size();
  if (n > total) {
    throw Error("cannot sample " + std::to_string(n) + " points from " + std::to_string(total));
  }
  if (n == 0) return {};

  // Rank used only when two candidates are at exactly the same distance.
  std::vector<PointIndex> rank(total);
  {
    std::vector<PointIndex> perm(total);
    std::iota(perm.begin(), perm.end(), PointIndex{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t r = 0; r < total; ++r) rank[perm[r]] = static_cast<PointIndex>(r);
  }

  Point3 centroid = Point3::Zero();
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(total);

  PointIndex current = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    const double d = (cloud.points[i] - centroid).squaredNorm();
    if (d < best || (d == best && rank[i] < rank[current])) {
      best = d;
      current = static_cast<PointIndex>(i);
    }
  }

  // Candidates live in structure-of-arrays form and picked points are
  // swapped out, so the inner loop streams over contiguous memory.
  std::vector<double> xs(total), ys(total), zs(total);
  std::vector<PointIndex> ids(total);
  for (std::size_t i = 0; i < total; ++i) {
    xs[i] = cloud.points[i].x();
    ys[i] = cloud.points[i].y();
    zs[i] = cloud.points[i].z();
    ids[i] = static_cast<PointIndex>(i);
  }
  std::vector<double> min_dist(total, std::numeric_limits<double>::infinity());
  std::size_t live = total;
  auto remove = [&](std::size_t slot) {
    --live;
    std::swap(xs[slot], xs[live]);
    std::swap(ys[slot], ys[live]);
    std::swap(zs[slot], zs[live]);
    std::swap(ids[slot], ids[live]);
    std::swap(min_dist[slot], min_dist[live]);
  };

  std::vector<PointIndex> picked;
  picked.reserve(n);
  std::size_t slot = current;
  for (std::size_t s = 0; s < n; ++s) {
    picked.push_back(ids[slot]);
    const double cx = xs[slot], cy = ys[slot], cz = zs[slot];
    remove(slot);
    double far = -1.0;
    for (std::size_t i = 0; i < live; ++i) {
      const double dx = xs[i] - cx, dy = ys[i] - cy, dz = zs[i] - cz;
      const double d = dx * dx + dy * dy + dz * dz;
      const double md = std::min(min_dist[i], d);
      min_dist[i] = md;
      far = std::max(far, md);
    }
    // Second pass only resolves which candidate attains the maximum.
    slot = live;
    for (std::size_t i = 0; i < live; ++i) {
      if (min_dist[i] == far && (slot == live || rank[ids[i]] < rank[ids[slot]])) slot = i;
    }
  }
  return picked;
}

LabeledCloud select(const LabeledCloud& cloud, const std::vector<PointIndex>& indices) {
  LabeledCloud out;
  out.points.reserve(indices.size());
  if (cloud.has_labels()) out.labels.emplace().reserve(indices.size());
  for (PointIndex i : indices) {
    out.points.push_back(cloud.points.at(i));
    if (cloud.has_labels()) out.labels->push_back((*cloud.labels)[i]);
  }
  return out;
}

LabeledCloud furthest_point_sample(const LabeledCloud& cloud, std::size_t n, std::uint64_t seed) {
  return select(cloud, furthest_point_sample_indices(cloud, n, seed));
}

}  // namespace planeseg
