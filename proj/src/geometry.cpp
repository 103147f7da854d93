#include "planeseg/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace planeseg {

Eigen::Vector3d orient_normal(const Eigen::Vector3d& n, const Eigen::Vector3d& gravity) {
  const double along = n.dot(gravity);
  if (along < -kOrientationTieTolerance) return -n;
  if (along > kOrientationTieTolerance) return n;
  if (n.x() < -kOrientationTieTolerance) return -n;
  if (n.x() > kOrientationTieTolerance) return n;
  return n.y() < 0.0 ? Eigen::Vector3d(-n) : n;
}

namespace {

SmallestEigen unpack(const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>& es) {
  SmallestEigen out;
  // Eigenvalues are sorted ascending.
  out.value = es.eigenvalues()(0);
  out.middle = es.eigenvalues()(1);
  out.largest = es.eigenvalues()(2);
  out.vector = es.eigenvectors().col(0).normalized();
  return out;
}

}  // namespace

SmallestEigen smallest_eigen(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  return unpack(es);
}

SmallestEigen smallest_eigen_direct(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(m);
  return unpack(es);
}

}  // namespace planeseg
