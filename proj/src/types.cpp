#include "planeseg/types.hpp"

#include <cmath>

namespace planeseg {

char to_char(Category c) noexcept { return c == Category::H ? 'h' : 'v'; }

void check_cloud(const LabeledCloud& cloud) {
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (!cloud.points[i].allFinite()) {
      throw Error("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  if (cloud.labels && cloud.labels->size() != cloud.points.size()) {
    throw Error("label count " + std::to_string(cloud.labels->size()) +
                " does not match point count " +
                std::to_string(cloud.points.size()));
  }
}

SegmenterConfig default_config() { return SegmenterConfig{}; }

void validate_config(const SegmenterConfig& c) {
  auto positive = [](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ConfigError(name, "must be a finite positive number");
    }
  };
  if (!(c.theta_r_out >= 0.0 && c.theta_r_out <= 1.0)) {
    throw ConfigError("theta_r_out", "must lie in [0, 1]");
  }
  if (c.theta_n_in == 0) throw ConfigError("theta_n_in", "must be positive");
  positive("theta_e_n", c.theta_e_n);
  if (!(c.theta_coplane > 0.0 && c.theta_coplane < 1.0)) {
    throw ConfigError("theta_coplane", "must lie in (0, 1)");
  }
  positive("residual_distance", c.residual_distance);
  positive("octree_extent", c.octree_extent);
  // Node indices and paths assume at most 2^(3*20) leaves.
  if (c.octree_max_depth < 1 || c.octree_max_depth > 20) {
    throw ConfigError("octree_max_depth", "must lie in [1, 20]");
  }
  positive("voxel_size", c.voxel_size);
  if (c.classify_k < 3) throw ConfigError("classify_k", "must be at least 3");
  if (!c.gravity.allFinite() || std::abs(c.gravity.norm() - 1.0) > 1e-6) {
    throw ConfigError("gravity", "must be a unit vector");
  }
}

void check_result(const SegmentationResult& result, std::size_t n_points) {
  if (result.assignment.size() != n_points) {
    throw Error("assignment size does not match point count");
  }
  std::vector<std::int32_t> owner(n_points, kUnassigned);
  for (std::size_t id = 0; id < result.planes.size(); ++id) {
    const Plane& plane = result.planes[id];
    if (plane.count != plane.point_indices.size()) {
      throw Error("plane " + std::to_string(id) + " count mismatch");
    }
    for (PointIndex i : plane.point_indices) {
      if (i >= n_points) throw Error("plane index out of range");
      if (owner[i] != kUnassigned) {
        throw Error("point " + std::to_string(i) + " belongs to two planes");
      }
      owner[i] = static_cast<std::int32_t>(id);
    }
  }
  for (PointIndex i : result.residual_indices) {
    if (i >= n_points || owner[i] != kUnassigned) {
      throw Error("residual point " + std::to_string(i) + " is also assigned");
    }
  }
  if (owner != result.assignment) {
    throw Error("assignment disagrees with plane membership");
  }
  std::size_t assigned = 0;
  for (auto o : owner) assigned += o != kUnassigned;
  if (assigned + result.residual_indices.size() != n_points) {
    throw Error("planes and residuals do not cover the cloud");
  }
}

}  // namespace planeseg
