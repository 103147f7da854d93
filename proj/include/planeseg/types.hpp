#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace planeseg {

/// 3D point in meters.
using Point3 = Eigen::Vector3d;

/// Index of a point in its source cloud.
using PointIndex = std::uint32_t;

/// Unit vector along +z, the default gravity baseline.
inline const Eigen::Vector3d kUp{0.0, 0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by validate_config(); field() names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/**
 * @brief Inclination category of a point.
 *
 * H: local normal within pi/4 of gravity (horizontal-leaning surface).
 * V: everything else. H < V is used for deterministic tie handling.
 */
enum class Category : std::uint8_t { H = 0, V = 1 };

char to_char(Category c) noexcept;

/// Point cloud with optional per-point categories.
struct LabeledCloud {
  std::vector<Point3> points;
  std::optional<std::vector<Category>> labels;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  bool has_labels() const noexcept { return labels.has_value(); }
};

/// Throws Error if a coordinate is non-finite or the label count mismatches.
void check_cloud(const LabeledCloud& cloud);

/**
 * @brief Planar segment with the running statistics needed for O(1) merges.
 *
 * Besides the member set, count, centroid, normal and mean squared error
 * along the normal, the plane keeps the raw second-moment matrix
 * sum(x x^T) so that the scatter matrix can be recovered after a merge as
 * second_moment - count * centroid * centroid^T.
 */
struct Plane {
  std::vector<PointIndex> point_indices;
  std::size_t count = 0;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = kUp;
  double mse_normal = 0.0;  ///< m^2
  Eigen::Matrix3d second_moment = Eigen::Matrix3d::Zero();

  /// Unnormalized scatter matrix about the centroid.
  Eigen::Matrix3d scatter() const {
    return second_moment -
           static_cast<double>(count) * centroid * centroid.transpose();
  }
};

/// Thresholds and structural parameters of the segmenter.
struct SegmenterConfig {
  std::size_t theta_n_out = 5;       ///< max outliers for purity
  double theta_r_out = 0.05;         ///< max outlier ratio for purity
  std::size_t theta_n_in = 5;        ///< min inliers to fit a plane
  double theta_e_n = 0.005;          ///< max MSE along the normal, m^2
  double theta_coplane = 0.85;       ///< coplanarity cosine threshold
  double residual_distance = 0.005;  ///< residual point-to-plane gate, m
  double octree_extent = 3.2;        ///< root cube edge, m
  int octree_max_depth = 7;
  double voxel_size = 0.02;  ///< m
  std::size_t classify_k = 16;
  bool classify_edge_aware = true;  ///< see estimate_normals()
  Eigen::Vector3d gravity = kUp;

  bool operator==(const SegmenterConfig&) const = default;
};

/// Published hyperparameters of the method.
SegmenterConfig default_config();

/// Throws ConfigError naming the first field that violates its invariant.
void validate_config(const SegmenterConfig& cfg);

/// Timing of the four pipeline stages, milliseconds.
struct StageTimings {
  double downsample_ms = 0.0;  ///< t_d
  double classify_ms = 0.0;    ///< t_c
  double build_ms = 0.0;       ///< t_b
  double segment_ms = 0.0;     ///< t_s

  double total_ms() const noexcept {
    return downsample_ms + classify_ms + build_ms + segment_ms;
  }
};

/// Sentinel for "no plane" in per-point assignments.
inline constexpr std::int32_t kUnassigned = -1;

/// Output of a plane extractor.
struct SegmentationResult {
  std::vector<Plane> planes;
  std::vector<PointIndex> residual_indices;  ///< points left unassigned
  std::vector<std::int32_t> assignment;      ///< plane id per point or -1
  StageTimings timings;
};

/// Throws Error unless planes are disjoint and agree with the assignment.
void check_result(const SegmentationResult& result, std::size_t n_points);

}  // namespace planeseg
