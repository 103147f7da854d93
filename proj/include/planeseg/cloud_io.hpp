#pragma once

#include "planeseg/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace planeseg {

enum class CloudFormat { PlyAscii, PlyBinaryLE, Xyz };

/// Picks the format from the file extension (.xyz/.txt -> Xyz, else PLY
/// binary). Reading a PLY file always honours the format in its header.
CloudFormat format_from_path(const std::string& path);

/// Vertex data of a PLY file: coordinates, optional `category` labels and
/// optional `plane_id` column.
struct PlyContents {
  LabeledCloud cloud;
  std::optional<std::vector<std::int32_t>> plane_id;
};

PlyContents read_ply(const std::string& path);

/**
 * @brief Reads a point cloud.
 *
 * PLY files may carry a scalar `category` property (0 = H, 1 = V), which
 * populates the labels. Throws Error with a line number (text) or byte
 * offset (binary) on malformed input and on non-finite coordinates.
 */
LabeledCloud read_cloud(const std::string& path, CloudFormat format);
LabeledCloud read_cloud(const std::string& path);

/**
 * @brief Writes a point cloud.
 *
 * PLY output has float32 x,y,z, a uchar `category` when labels are present,
 * and, when an assignment is given, uchar red/green/blue from palette_color()
 * plus an int32 `plane_id` (-1 = unassigned). XYZ output has coordinates only.
 */
void write_cloud(const LabeledCloud& cloud,
                 const std::vector<std::int32_t>* assignment,
                 const std::string& path, CloudFormat format);

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed 16-entry palette cycled by plane id; gray for kUnassigned.
Rgb palette_color(std::int32_t plane_id) noexcept;

}  // namespace planeseg
