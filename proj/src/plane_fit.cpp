#include "planeseg/plane_fit.hpp"

#include "planeseg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace planeseg {
namespace {

// Relative size of the middle eigenvalue below which the set is treated as
// collinear.
constexpr double kRankTolerance = 1e-12;

void set_from_scatter(Plane& plane, const Eigen::Matrix3d& scatter, const Eigen::Vector3d& gravity) {
  const SmallestEigen e = smallest_eigen(scatter);
  plane.normal = orient_normal(e.vector, gravity);
  plane.mse_normal = std::max(e.value, 0.0) / static_cast<double>(plane.count);
}

}  // namespace

Eigen::Matrix3d batch_scatter(std::span<const Point3> points, std::span<const PointIndex> indices) {
  Point3 mu = Point3::Zero();
  for (PointIndex i : indices) mu += points[i];
  mu /= static_cast<double>(indices.size());
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (PointIndex i : indices) {
    const Point3 d = points[i] - mu;
    s.noalias() += d * d.transpose();
  }
  return s;
}

Plane fit_plane_pca(std::span<const Point3> points, std::span<const PointIndex> indices,
                    const Eigen::Vector3d& gravity) {
  if (indices.size() < 3) throw Error("plane fit needs at least three points");
  Plane plane;
  plane.point_indices.assign(indices.begin(), indices.end());
  plane.count = indices.size();
  for (PointIndex i : indices) {
    const Point3& p = points[i];
    plane.centroid += p;
    plane.second_moment.noalias() += p * p.transpose();
  }
  plane.centroid /= static_cast<double>(plane.count);

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (PointIndex i : indices) {
    const Point3 d = points[i] - plane.centroid;
    scatter.noalias() += d * d.transpose();
  }
  const SmallestEigen e = smallest_eigen(scatter);
  if (!(e.middle > kRankTolerance * std::max(e.largest, 1e-300))) {
    throw Error("degenerate point set: rank < 2");
  }
  plane.normal = orient_normal(e.vector, gravity);
  plane.mse_normal = std::max(e.value, 0.0) / static_cast<double>(plane.count);
  return plane;
}

void merge_into(Plane& into, Plane&& from, const Eigen::Vector3d& gravity) {
  const double n1 = static_cast<double>(into.count);
  const double n2 = static_cast<double>(from.count);
  into.second_moment += from.second_moment;
  into.centroid = (n1 / (n1 + n2)) * into.centroid + (n2 / (n1 + n2)) * from.centroid;
  into.count += from.count;
  into.point_indices.insert(into.point_indices.end(), from.point_indices.begin(),
                            from.point_indices.end());
  set_from_scatter(into, into.scatter(), gravity);
}

Plane merge_planes(const Plane& p1, const Plane& p2, const Eigen::Vector3d& gravity) {
  std::vector<PointIndex> a = p1.point_indices, b = p2.point_indices;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] == b[j]) throw Error("merge_planes: planes share point " + std::to_string(a[i]));
    a[i] < b[j] ? ++i : ++j;
  }
  Plane out = p1;
  merge_into(out, Plane(p2), gravity);
  return out;
}

void absorb_point(Plane& plane, PointIndex index, const Point3& p) {
  const double n = static_cast<double>(plane.count);
  plane.centroid = (n * plane.centroid + p) / (n + 1.0);
  plane.second_moment.noalias() += p * p.transpose();
  plane.count += 1;
  plane.point_indices.push_back(index);
}

void refresh_plane(Plane& plane, const Eigen::Vector3d& gravity) {
  set_from_scatter(plane, plane.scatter(), gravity);
}

bool coplanar_ok(const Plane& p1, const Plane& p2, const SegmenterConfig& cfg) {
  const double theta = cfg.theta_coplane;
  if (std::abs(p1.normal.dot(p2.normal)) < theta) return false;
  const Eigen::Vector3d delta = p1.centroid - p2.centroid;
  const double dist = delta.norm();
  if (dist == 0.0) return true;
  const Eigen::Vector3d dir = delta / dist;
  return std::abs(p1.normal.dot(dir)) <= 1.0 - theta && std::abs(p2.normal.dot(dir)) <= 1.0 - theta;
}

double point_plane_distance(const Point3& p, const Plane& plane) {
  return std::abs(plane.normal.dot(p - plane.centroid));
}

}  // namespace planeseg
