#pragma once

#include "planeseg/types.hpp"

#include <string>
#include <vector>

namespace planeseg {

struct PinholeIntrinsics {
  double fx = 1.0, fy = 1.0;  ///< focal lengths, pixels
  double cx = 0.0, cy = 0.0;  ///< principal point, pixels
  double max_range = 1.5;     ///< depths beyond this are discarded, m
};

/// Row-major depth image in meters; 0 marks an invalid pixel.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  PinholeIntrinsics intrinsics;
};

/// Throws Error unless depth.size() == width*height, fx, fy > 0 and
/// max_range > 0.
void check_frame(const DepthFrame& frame);

/**
 * @brief Back-projects valid pixels into camera-frame points.
 *
 * Pixel (u, v) with 0 < d <= max_range maps to
 * (d (u - cx) / fx, d (v - cy) / fy, d). Output is in row-major pixel order.
 */
LabeledCloud backproject(const DepthFrame& frame);

/// Reads `fx`, `fy`, `cx`, `cy`, `max_range` from a `key = value` file.
PinholeIntrinsics read_intrinsics(const std::string& path);

/// Loads a 16-bit grayscale PNG whose values are millimeters.
DepthFrame load_depth_png(const std::string& path, const PinholeIntrinsics& intrinsics);

/// Writes depth (meters) as a 16-bit grayscale PNG in millimeters.
void save_depth_png(const std::string& path, const DepthFrame& frame);

}  // namespace planeseg
