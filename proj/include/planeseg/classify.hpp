#pragma once

#include "planeseg/types.hpp"

#include <vector>

namespace planeseg {

/// Local surface normal of a point from PCA over its neighbourhood.
struct NormalEstimate {
  Eigen::Vector3d normal = kUp;
  double curvature = 0.0;  ///< lambda_min / trace, in [0, 1/3]
  std::size_t neighbor_count = 0;
};

/**
 * @brief PCA normals over the exact k nearest neighbours (self included).
 *
 * With edge_aware set, each point then takes the estimate of the neighbour
 * j (itself included) minimising (n_j . (p_i - mu_j))^2 + lambda_min_j / k,
 * i.e. the flattest nearby patch that also passes through the point. On a
 * plane this reproduces the plain estimate; next to a crease it avoids the
 * blended normal of a neighbourhood straddling both faces.
 *
 * Normals are oriented with orient_normal(). Throws Error when the cloud has
 * fewer than k points or k < 3.
 */
std::vector<NormalEstimate> estimate_normals(const LabeledCloud& cloud, std::size_t k,
                                             const Eigen::Vector3d& gravity = kUp,
                                             bool edge_aware = false);

/// Angle between a normal and a baseline, arccos(|b.n| / (|b||n|)), in
/// [0, pi/2]. Throws Error on a zero-length argument.
double angle_to_baseline(const Eigen::Vector3d& normal, const Eigen::Vector3d& baseline);

/// H when the normal is within pi/4 of the baseline (inclusive), else V.
Category categorize(const Eigen::Vector3d& normal, const Eigen::Vector3d& baseline);

/// Labels every point from its estimated normal (k = cfg.classify_k,
/// baseline = cfg.gravity, edge-aware per cfg.classify_edge_aware).
LabeledCloud classify_cloud(const LabeledCloud& cloud, const SegmenterConfig& cfg);

/// Replaces the labels of a cloud; throws Error on length mismatch.
LabeledCloud inject_labels(LabeledCloud cloud, std::vector<Category> labels);

/// Same label for every point (bypasses classification).
LabeledCloud uniform_labels(LabeledCloud cloud, Category c = Category::H);

}  // namespace planeseg
