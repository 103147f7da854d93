#pragma once

// Shared helpers and independent oracles for the test binaries.

#include "planeseg/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <unistd.h>
#include <random>
#include <string>
#include <vector>

namespace testing {

using planeseg::Category;
using planeseg::LabeledCloud;
using planeseg::Point3;
using planeseg::PointIndex;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("planeseg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::vector<PointIndex> iota_indices(std::size_t n) {
  std::vector<PointIndex> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<PointIndex>(i);
  return idx;
}

/// Uniform grid of nx*ny points on z = z0, spacing s, starting at (x0, y0).
inline std::vector<Point3> grid_xy(int nx, int ny, double s, double x0 = 0.0, double y0 = 0.0,
                                   double z0 = 0.0) {
  std::vector<Point3> pts;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) pts.emplace_back(x0 + i * s, y0 + j * s, z0);
  }
  return pts;
}

inline LabeledCloud labeled(std::vector<Point3> pts, Category c) {
  LabeledCloud cloud;
  cloud.labels = std::vector<Category>(pts.size(), c);
  cloud.points = std::move(pts);
  return cloud;
}

inline std::vector<Point3> random_points(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = Point3(u(rng), u(rng), u(rng));
  return pts;
}

/// Two-pass scatter about the mean, straight from the definition.
inline Eigen::Matrix3d oracle_scatter(const std::vector<Point3>& pts, Point3* mean_out = nullptr) {
  Point3 mean = Point3::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) s += (p - mean) * (p - mean).transpose();
  if (mean_out) *mean_out = mean;
  return s;
}

/// Eigenvector of the smallest eigenvalue, from Eigen's solver.
inline Eigen::Vector3d oracle_normal(const Eigen::Matrix3d& s, double* lambda_min = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
  if (lambda_min) *lambda_min = es.eigenvalues()(0);
  return es.eigenvectors().col(0);
}

/// Brute-force k nearest neighbours ordered by (squared distance, index).
inline std::vector<PointIndex> brute_knn(const std::vector<Point3>& pts, const Point3& q, std::size_t k) {
  std::vector<std::pair<double, PointIndex>> d;
  d.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d.emplace_back((pts[i] - q).squaredNorm(), static_cast<PointIndex>(i));
  }
  k = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<PointIndex> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

inline double angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::min(1.0, std::abs(a.normalized().dot(b.normalized())));
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

}  // namespace testing
