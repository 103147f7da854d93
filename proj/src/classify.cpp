#include "planeseg/classify.hpp"

#include "planeseg/geometry.hpp"
#include "planeseg/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace planeseg {
namespace {

// Absorbs rounding in arccos so that an exact 45 degree normal stays H.
constexpr double kBoundaryTolerance = 1e-12;

constexpr int kShiftRounds = 2;

}  // namespace

std::vector<NormalEstimate> estimate_normals(const LabeledCloud& cloud, std::size_t k,
                                             const Eigen::Vector3d& gravity, bool edge_aware) {
  if (k < 3) throw Error("normal estimation needs k >= 3");
  if (cloud.size() < k) {
    throw Error("cloud has " + std::to_string(cloud.size()) + " points, fewer than k = " +
                std::to_string(k));
  }
  const std::size_t n = cloud.size();
  const KnnGrid grid(cloud.points);
  std::vector<NormalEstimate> out(n);
  std::vector<Point3> means(n);
  std::vector<double> mse(n);
  std::vector<PointIndex> all_nbrs(edge_aware ? n * k : 0);
  std::vector<PointIndex> nbrs;
  for (std::size_t i = 0; i < n; ++i) {
    grid.query(cloud.points[i], k, nbrs);
    Point3 mean = Point3::Zero();
    for (PointIndex j : nbrs) mean += cloud.points[j];
    mean /= static_cast<double>(nbrs.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (PointIndex j : nbrs) {
      const Point3 d = cloud.points[j] - mean;
      cov.noalias() += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    const SmallestEigen e = smallest_eigen_direct(cov);
    const double trace = cov.trace();
    NormalEstimate& est = out[i];
    est.normal = orient_normal(e.vector, gravity);
    est.curvature = trace > 0.0 ? std::clamp(e.value / trace, 0.0, 1.0 / 3.0) : 0.0;
    est.neighbor_count = nbrs.size();
    means[i] = mean;
    mse[i] = std::max(e.value, 0.0);
    if (edge_aware) std::copy(nbrs.begin(), nbrs.end(), all_nbrs.begin() + i * k);
  }
  if (!edge_aware) return out;

  // Each point adopts the neighbouring patch that best explains it:
  // squared distance to the patch plane plus the patch's own mean squared
  // residual. Near a crease this picks a patch lying on one side only. The
  // second round also offers the patches the neighbours picked, which
  // reaches flat patches two hops away.
  std::vector<PointIndex> choice(n);
  std::iota(choice.begin(), choice.end(), PointIndex{0});
  std::vector<PointIndex> next(n);
  for (int round = 0; round < kShiftRounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      PointIndex best = choice[i];
      auto score = [&](PointIndex c) {
        const double d = out[c].normal.dot(cloud.points[i] - means[c]);
        return d * d + mse[c];
      };
      double best_score = score(best);
      for (std::size_t m = 0; m < k; ++m) {
        const PointIndex c = choice[all_nbrs[i * k + m]];
        const double sc = score(c);
        if (sc < best_score || (sc == best_score && c < best)) {
          best_score = sc;
          best = c;
        }
      }
      next[i] = best;
    }
    choice.swap(next);
  }
  std::vector<NormalEstimate> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = out[choice[i]];
  return shifted;
}

double angle_to_baseline(const Eigen::Vector3d& normal, const Eigen::Vector3d& baseline) {
  const double scale = normal.norm() * baseline.norm();
  if (!(scale > 0.0)) throw Error("angle_to_baseline: zero-length vector");
  const double c = std::clamp(std::abs(baseline.dot(normal)) / scale, 0.0, 1.0);
  return std::acos(c);
}

Category categorize(const Eigen::Vector3d& normal, const Eigen::Vector3d& baseline) {
  return angle_to_baseline(normal, baseline) <= std::numbers::pi / 4.0 + kBoundaryTolerance
             ? Category::H
             : Category::V;
}

LabeledCloud classify_cloud(const LabeledCloud& cloud, const SegmenterConfig& cfg) {
  const auto normals =
      estimate_normals(cloud, cfg.classify_k, cfg.gravity, cfg.classify_edge_aware);
  std::vector<Category> labels(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) labels[i] = categorize(normals[i].normal, cfg.gravity);
  LabeledCloud out;
  out.points = cloud.points;
  out.labels = std::move(labels);
  return out;
}

LabeledCloud inject_labels(LabeledCloud cloud, std::vector<Category> labels) {
  if (labels.size() != cloud.size()) {
    throw Error("label count " + std::to_string(labels.size()) + " does not match point count " +
                std::to_string(cloud.size()));
  }
  cloud.labels = std::move(labels);
  return cloud;
}

LabeledCloud uniform_labels(LabeledCloud cloud, Category c) {
  cloud.labels = std::vector<Category>(cloud.size(), c);
  return cloud;
}

}  // namespace planeseg
