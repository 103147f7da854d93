#pragma once

#include <Eigen/Core>

namespace planeseg {

/// Normals within this of perpendicular to gravity use the x/y tie rule.
inline constexpr double kOrientationTieTolerance = 1e-9;

/**
 * @brief Fixes the sign of a normal.
 *
 * The result points toward `gravity` (n.g >= 0). For normals perpendicular
 * to gravity the sign is chosen so that n.x >= 0, then n.y >= 0.
 */
Eigen::Vector3d orient_normal(const Eigen::Vector3d& n, const Eigen::Vector3d& gravity);

/// Smallest eigenvalue and its unit eigenvector of a symmetric 3x3 matrix,
/// plus the middle eigenvalue (used for rank checks).
struct SmallestEigen {
  double value = 0.0;
  double middle = 0.0;
  double largest = 0.0;
  Eigen::Vector3d vector = Eigen::Vector3d::UnitZ();
};

/// Iterative (accurate) solver.
SmallestEigen smallest_eigen(const Eigen::Matrix3d& m);

/// Closed-form solver; faster, slightly less accurate for near-equal
/// eigenvalues.
SmallestEigen smallest_eigen_direct(const Eigen::Matrix3d& m);

}  // namespace planeseg
