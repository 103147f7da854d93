#pragma once

#include "planeseg/types.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace planeseg {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/**
 * @brief Cubic cell of the octree.
 *
 * Child i covers the octant selected by the bits of i: bit0 -> high x,
 * bit1 -> high y, bit2 -> high z. Cells are half-open [min, max) except on
 * the root's max faces, which are closed. Every node keeps the indices of all
 * points inside it, not just leaves.
 */
struct OctreeNode {
  int depth = 0;
  Point3 bounds_min = Point3::Zero();
  Point3 bounds_max = Point3::Zero();
  std::array<NodeId, 8> children{kNoNode, kNoNode, kNoNode, kNoNode,
                                 kNoNode, kNoNode, kNoNode, kNoNode};
  NodeId parent = kNoNode;
  int octant = -1;  ///< index within the parent, -1 for the root
  std::size_t count_h = 0;
  std::size_t count_v = 0;

  std::size_t size() const noexcept { return count_h + count_v; }
  bool is_leaf() const noexcept;
  Point3 center() const { return 0.5 * (bounds_min + bounds_max); }
};

/// Fixed-extent octree over a labeled cloud.
class Octree {
 public:
  /**
   * @brief Inserts every point root-to-leaf.
   *
   * The root cube has edge cfg.octree_extent and is centered on the cloud's
   * bounding-box center unless `origin` (the root's min corner) is given.
   * Points outside the cube are dropped and reported by dropped_indices().
   * Throws Error for an empty or unlabeled cloud or a non-positive extent.
   */
  static Octree build(const LabeledCloud& cloud, const SegmenterConfig& cfg,
                      std::optional<Point3> origin = std::nullopt);

  static constexpr NodeId root_id() noexcept { return 0; }
  const OctreeNode& root() const { return nodes_.front(); }
  const OctreeNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Indices of the points inside a node, in input order.
  std::span<const PointIndex> point_indices(NodeId id) const;

  /// Occupied children in octant order; empty for a leaf.
  std::vector<NodeId> children_of(NodeId id) const;

  /// Coordinates of the node's points, in input order.
  std::vector<Point3> node_points(NodeId id, const LabeledCloud& cloud) const;

  /// Octant digits from the root, e.g. "07" for child 7 of child 0.
  std::string octant_path(NodeId id) const;

  int max_depth() const noexcept { return max_depth_; }
  double extent() const noexcept { return extent_; }
  const Point3& origin() const noexcept { return origin_; }
  double leaf_edge() const noexcept;
  const std::vector<PointIndex>& dropped_indices() const noexcept { return dropped_; }

  /// One line per node in depth-first octant order:
  /// `<depth> <path or -> <count_h> <count_v>`.
  void dump(std::ostream& out) const;

 private:
  std::vector<OctreeNode> nodes_;
  std::vector<std::uint32_t> first_;  // per node offset into indices_
  std::vector<PointIndex> indices_;
  std::vector<PointIndex> dropped_;
  int max_depth_ = 0;
  double extent_ = 0.0;
  Point3 origin_ = Point3::Zero();
};

}  // namespace planeseg
