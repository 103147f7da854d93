#pragma once

#include "planeseg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace planeseg {

/// Closed staircase ascending along +x: riser i at x = i*length spanning
/// z in [i*height, (i+1)*height], tread i at z = (i+1)*height spanning
/// x in [i*length, (i+1)*length]; all faces span y in [0, width].
struct StaircaseSpec {
  int steps = 3;
  double length = 0.3;
  double width = 1.0;
  double height = 0.2;
};

/// Box resting on z = 0: top face plus four sides, no bottom.
struct BoxSpec {
  double length = 1.0;
  double width = 1.0;
  double height = 0.2;
};

/// Rectangle through the origin whose unit normal has z-component nz.
struct PlaneSpec {
  double length = 1.0;
  double width = 1.0;
  double nz = 1.0;
};

using ShapeSpec = std::variant<StaircaseSpec, BoxSpec, PlaneSpec>;

/// Default surface sampling density, points per m^2.
inline constexpr double kDefaultDensity = 1e4;

/**
 * @brief Synthetic cloud with per-point ground-truth plane membership.
 *
 * Plane k is {x : gt_normals[k] . x = gt_offsets[k]}. Labels hold the true
 * geometric category of each point's plane.
 */
struct GroundTruthScene {
  LabeledCloud cloud;
  std::vector<std::int32_t> gt_plane_id;
  std::vector<Eigen::Vector3d> gt_normals;
  std::vector<double> gt_offsets;
  ShapeSpec spec;

  std::size_t plane_count() const noexcept { return gt_normals.size(); }
};

/// Throws Error unless ids index valid planes and sizes agree.
void check_scene(const GroundTruthScene& scene);

/// Largest |n . x - offset| over all points.
double max_plane_residual(const GroundTruthScene& scene);

GroundTruthScene gen_staircase(const StaircaseSpec& spec, double density, std::uint64_t seed);
GroundTruthScene gen_box(const BoxSpec& spec, double density, std::uint64_t seed);
/// The normal's azimuth is drawn from the seed; label H iff the normal is
/// within pi/4 of +z.
GroundTruthScene gen_plane(const PlaneSpec& spec, double density, std::uint64_t seed);
GroundTruthScene generate(const ShapeSpec& spec, double density, std::uint64_t seed);

/// Isotropic Gaussian perturbation of every coordinate (sigma in meters).
GroundTruthScene add_noise(GroundTruthScene scene, double sigma, std::uint64_t seed);

struct AugmentOps {
  std::optional<double> jitter;         ///< uniform per-coordinate amplitude, m
  bool rotate_z = false;                ///< random rotation about +z
  std::optional<double> rotate_angle;   ///< fixed angle instead of random, rad
  std::size_t drop_clusters = 0;        ///< number of balls removed
  double drop_radius = 0.05;            ///< m
};

/// Applies jitter, then rotation (points and normals), then cluster removal.
GroundTruthScene augment(GroundTruthScene scene, const AugmentOps& ops, std::uint64_t seed);

/// Evaluation staircases: 2-6 steps, length [0.2, 0.4] m, width
/// [0.3, 1.5] m, height [0.1, 0.3] m, drawn uniformly per scene.
std::vector<GroundTruthScene> gen_eval_suite(std::size_t n_scenes, std::uint64_t seed,
                                             double density = kDefaultDensity);

/// Keeps the listed points (in that order) with their ground truth.
GroundTruthScene subsample(const GroundTruthScene& scene, const std::vector<PointIndex>& indices);

/// Sidecar text format: header, `planes P`, P lines `nx ny nz offset`,
/// `points N`, N lines of plane ids.
void write_ground_truth(std::ostream& out, const GroundTruthScene& scene);
void write_ground_truth(const std::string& path, const GroundTruthScene& scene);

/// Reads a sidecar; the returned scene has no points.
GroundTruthScene read_ground_truth(std::istream& in);
GroundTruthScene read_ground_truth(const std::string& path);

}  // namespace planeseg
