#pragma once

#include "planeseg/types.hpp"

#include <iosfwd>
#include <string>

namespace planeseg {

/**
 * @brief Flat `key = value` serialization of SegmenterConfig.
 *
 * One entry per line, SI units, `#` starts a comment. Keys not present keep
 * their default value; unknown keys are an error. gravity is written as
 * three comma-separated components. Values are printed with 17 significant
 * digits so that write -> parse is lossless.
 */
SegmenterConfig parse_config(std::istream& in);
SegmenterConfig read_config(const std::string& path);

void write_config(std::ostream& out, const SegmenterConfig& cfg);
void write_config(const std::string& path, const SegmenterConfig& cfg);

/// Parses "x,y,z" (commas or whitespace) into a vector.
Eigen::Vector3d parse_vector3(const std::string& text);

}  // namespace planeseg
