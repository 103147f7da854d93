#pragma once

#include "planeseg/types.hpp"

#include <cstdint>

namespace planeseg {

struct RansacConfig {
  double theta_pf = 0.01;            ///< inlier distance, m
  std::size_t max_iterations = 1000;  ///< hypotheses per extracted plane
  std::size_t min_plane_points = 50;
  std::uint64_t seed = 0;
  Eigen::Vector3d gravity = kUp;  ///< only orients the output normals
  /// Max angle between a point's estimated normal and the hypothesis
  /// normal for the point to count as an inlier; 0 disables the test.
  double normal_tolerance_deg = 10.0;
  std::size_t normal_k = 16;  ///< neighbourhood for the point normals
};

/// Throws Error unless theta_pf > 0, max_iterations >= 1,
/// min_plane_points >= 3, normal_tolerance_deg in [0, 90) and normal_k >= 3.
void validate_ransac(const RansacConfig& cfg);

/**
 * @brief Iterative RANSAC plane extraction.
 *
 * Each round scores max_iterations random 3-point hypotheses on the
 * remaining points, refits the best one by PCA over its inliers (repeating
 * refit / reselection until the inlier set is stable), and accepts it if it
 * keeps at least min_plane_points inliers, which are then removed. Stops at
 * the first rejected round. Collinear samples are skipped. Labels are
 * ignored. Deterministic for a fixed seed.
 *
 * With normal_tolerance_deg > 0 an inlier must also have an estimated
 * normal (edge-aware PCA over normal_k neighbours) within that angle of the
 * plane normal. Without it, slabs cutting diagonally through the edges of a
 * staircase outscore single treads. Normal estimation is included in the
 * reported segment time.
 */
SegmentationResult ransac_segment(const LabeledCloud& cloud, const RansacConfig& cfg);

}  // namespace planeseg
