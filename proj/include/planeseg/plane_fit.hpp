#pragma once

#include "planeseg/types.hpp"

#include <span>

namespace planeseg {

/**
 * @brief Fits a plane to the listed points by PCA.
 *
 * The scatter matrix is accumulated about the centroid,
 *   S = sum (x - mu)(x - mu)^T,
 * the normal is the eigenvector of its smallest eigenvalue (oriented with
 * orient_normal()) and mse_normal = lambda_min / N. The raw second moment
 * sum x x^T is stored for later merges. Throws Error for fewer than three
 * points or a rank < 2 (collinear or coincident) set.
 */
Plane fit_plane_pca(std::span<const Point3> points, std::span<const PointIndex> indices,
                    const Eigen::Vector3d& gravity = kUp);

/// Scatter matrix about the centroid computed directly from the points.
Eigen::Matrix3d batch_scatter(std::span<const Point3> points, std::span<const PointIndex> indices);

/**
 * @brief Merges two planes from their statistics only.
 *
 * second_moment and count add, the centroid is the count-weighted mean, and
 * the scatter is rebuilt as second_moment - N mu mu^T before a fresh
 * eigendecomposition. Member indices are concatenated (p1's first). No
 * per-point arithmetic is done. Throws Error if the member sets overlap.
 */
Plane merge_planes(const Plane& p1, const Plane& p2, const Eigen::Vector3d& gravity = kUp);

/// merge_planes() without the overlap check; `into` absorbs `from`.
void merge_into(Plane& into, Plane&& from, const Eigen::Vector3d& gravity);

/// Adds single points to a plane's statistics (not its normal); call
/// refresh_plane() afterwards.
void absorb_point(Plane& plane, PointIndex index, const Point3& p);

/// Recomputes normal and mse_normal from count, centroid and second moment.
void refresh_plane(Plane& plane, const Eigen::Vector3d& gravity);

/**
 * @brief Coplanarity test between two planes.
 *
 * True iff |n1.n2| >= theta and both |n_k . (mu1 - mu2)| / |mu1 - mu2| are
 * <= 1 - theta. Coincident centroids satisfy the offset clauses.
 */
bool coplanar_ok(const Plane& p1, const Plane& p2, const SegmenterConfig& cfg);

/// |n . (p - mu)|
double point_plane_distance(const Point3& p, const Plane& plane);

}  // namespace planeseg
