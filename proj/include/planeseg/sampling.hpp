#pragma once

#include "planeseg/types.hpp"

#include <cstdint>
#include <vector>

namespace planeseg {

/// Integer voxel coordinate floor(p / voxel).
Eigen::Vector3i voxel_key(const Point3& p, double voxel);

/**
 * @brief Groups point indices by occupied voxel.
 *
 * Groups are ordered lexicographically by voxel key (x, then y, then z);
 * indices inside a group keep input order.
 */
std::vector<std::vector<PointIndex>> voxel_groups(const LabeledCloud& cloud, double voxel);

/**
 * @brief Replaces the points of every occupied voxel by their centroid.
 *
 * The output label is the majority label of the voxel (ties -> H). Output
 * order follows voxel_groups().
 */
LabeledCloud voxel_downsample(const LabeledCloud& cloud, double voxel);

/**
 * @brief Greedy furthest point sampling.
 *
 * Starts from the point nearest the centroid, then repeatedly takes the
 * point farthest from the selected set. The seed only orders exactly tied
 * candidates. Throws Error if n exceeds the cloud size.
 */
std::vector<PointIndex> furthest_point_sample_indices(const LabeledCloud& cloud, std::size_t n,
                                                      std::uint64_t seed);

LabeledCloud furthest_point_sample(const LabeledCloud& cloud, std::size_t n, std::uint64_t seed);

/// Copies the listed points (and labels) in the given order.
LabeledCloud select(const LabeledCloud& cloud, const std::vector<PointIndex>& indices);

}  // namespace planeseg
