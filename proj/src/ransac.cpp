#include "planeseg/ransac.hpp"

#include "planeseg/classify.hpp"
#include "planeseg/plane_fit.hpp"

#include <Eigen/Geometry>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace planeseg {
namespace {

constexpr int kMaxRefits = 10;

// Distance test plus the optional normal test (min_cos <= 0 disables it).
struct InlierTest {
  const std::vector<Point3>& pts;
  const std::vector<Eigen::Vector3d>& normals;
  double threshold;
  double min_cos;

  bool operator()(PointIndex i, const Eigen::Vector3d& n, double d0) const {
    if (std::abs(n.dot(pts[i]) - d0) > threshold) return false;
    return min_cos <= 0.0 || std::abs(normals[i].dot(n)) >= min_cos;
  }
};

void select_inliers(const InlierTest& test, const std::vector<PointIndex>& pool,
                    const Eigen::Vector3d& n, const Point3& anchor, std::vector<PointIndex>& out) {
  out.clear();
  const double d0 = n.dot(anchor);
  for (PointIndex i : pool) {
    if (test(i, n, d0)) out.push_back(i);
  }
}

}  // namespace

void validate_ransac(const RansacConfig& cfg) {
  if (!(cfg.theta_pf > 0.0)) throw Error("theta_pf must be positive");
  if (cfg.max_iterations < 1) throw Error("max_iterations must be at least 1");
  if (cfg.min_plane_points < 3) throw Error("min_plane_points must be at least 3");
  if (!(cfg.normal_tolerance_deg >= 0.0 && cfg.normal_tolerance_deg < 90.0)) {
    throw Error("normal_tolerance_deg must lie in [0, 90)");
  }
  if (cfg.normal_k < 3) throw Error("normal_k must be at least 3");
}

SegmentationResult ransac_segment(const LabeledCloud& cloud, const RansacConfig& cfg) {
  validate_ransac(cfg);
  if (cloud.size() < 3) throw Error("RANSAC needs at least three points");
  const auto t0 = std::chrono::steady_clock::now();
  const auto& pts = cloud.points;
  std::mt19937_64 rng(cfg.seed);

  std::vector<Eigen::Vector3d> normals;
  double min_cos = 0.0;
  if (cfg.normal_tolerance_deg > 0.0 && cloud.size() >= cfg.normal_k) {
    for (const auto& e : estimate_normals(cloud, cfg.normal_k, cfg.gravity, true)) {
      normals.push_back(e.normal);
    }
    min_cos = std::cos(cfg.normal_tolerance_deg * std::numbers::pi / 180.0);
  }
  const InlierTest test{pts, normals, cfg.theta_pf, min_cos};

  SegmentationResult result;
  std::vector<PointIndex> remaining(cloud.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<PointIndex>(i);
  std::vector<PointIndex> inliers, next;

  while (remaining.size() >= std::max<std::size_t>(3, cfg.min_plane_points)) {
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    std::size_t best_count = 0;
    Eigen::Vector3d best_n = kUp;
    Point3 best_anchor = Point3::Zero();
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (a == b || b == c || a == c) continue;
      const Point3& p0 = pts[remaining[a]];
      const Eigen::Vector3d cross = (pts[remaining[b]] - p0).cross(pts[remaining[c]] - p0);
      const double len = cross.norm();
      if (!(len > 1e-12)) continue;
      const Eigen::Vector3d n = cross / len;
      const double d0 = n.dot(p0);
      std::size_t count = 0;
      for (PointIndex i : remaining) count += test(i, n, d0);
      if (count > best_count) {
        best_count = count;
        best_n = n;
        best_anchor = p0;
      }
    }
    if (best_count < cfg.min_plane_points) break;

    select_inliers(test, remaining, best_n, best_anchor, inliers);
    Plane plane;
    bool ok = false;
    for (int refit = 0; refit < kMaxRefits; ++refit) {
      try {
        plane = fit_plane_pca(pts, inliers, cfg.gravity);
      } catch (const Error&) {
        break;
      }
      ok = true;
      select_inliers(test, remaining, plane.normal, plane.centroid, next);
      if (next == inliers) break;
      inliers.swap(next);
      ok = false;
    }
    if (!ok || inliers.size() < cfg.min_plane_points) {
      // Refit left a degenerate or unstable set; keep the last valid fit if
      // it is still large enough, otherwise stop.
      if (inliers.size() < cfg.min_plane_points) break;
      try {
        plane = fit_plane_pca(pts, inliers, cfg.gravity);
      } catch (const Error&) {
        break;
      }
    }

    std::vector<bool> taken(cloud.size(), false);
    for (PointIndex i : inliers) taken[i] = true;
    std::erase_if(remaining, [&](PointIndex i) { return taken[i]; });
    result.planes.push_back(std::move(plane));
  }

  result.residual_indices = remaining;
  result.assignment.assign(cloud.size(), kUnassigned);
  for (std::size_t k = 0; k < result.planes.size(); ++k) {
    for (PointIndex i : result.planes[k].point_indices) result.assignment[i] = static_cast<std::int32_t>(k);
  }
  result.timings.segment_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace planeseg
