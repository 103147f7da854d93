#pragma once

#include "planeseg/octree.hpp"
#include "planeseg/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace planeseg {

/// Majority-label split of a node's points; ties go to H.
struct InlierSplit {
  std::vector<PointIndex> inliers;
  std::vector<PointIndex> outliers;
  Category majority = Category::H;
};

InlierSplit split_inliers(std::span<const PointIndex> indices, const std::vector<Category>& labels);
InlierSplit split_inliers(const Octree& tree, NodeId id, const LabeledCloud& cloud);

/// Criterion 1: n_out <= theta_n_out and r_out <= theta_r_out.
bool purity_ok(std::size_t n_out, double r_out, const SegmenterConfig& cfg) noexcept;

/// Criterion 2: n_in >= theta_n_in.
bool min_inliers_ok(std::size_t n_in, const SegmenterConfig& cfg) noexcept;

/// Criterion 3: a flat enough set, e_n <= theta_e_n.
///
/// e_n is the smallest eigenvalue of the unnormalised inlier scatter,
/// i.e. the summed squared residual along the fitted normal (m^2). It is
/// not divided by the inlier count, so large multi-plane nodes fail even
/// when their per-point error is small.
bool plane_candidate_ok(double e_n, const SegmenterConfig& cfg) noexcept;

/// e_n of a fitted inlier set: mse_normal * count.
double node_fit_error(const Plane& fit) noexcept;

enum class Verdict {
  Divide,        ///< enqueue occupied children
  ConquerPlane,  ///< inliers form a plane candidate
  Residual,      ///< node points go to the residual list
};

/// Which check decided a node.
enum class Decider { Purity, MinInliers, PlaneFit, Accepted };

struct NodeVerdict {
  Verdict kind = Verdict::Residual;
  Decider decided_by = Decider::Accepted;
  std::optional<Plane> plane;               ///< set for ConquerPlane
  std::vector<PointIndex> outlier_indices;  ///< minority points of a conquered node
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  double r_out = 0.0;
  std::optional<double> e_n;  ///< set when PCA ran; see node_fit_error()
};

/// Record of one dequeued node, for auditing the traversal.
struct NodeVisit {
  NodeId node = kNoNode;
  bool leaf = false;
  Verdict kind = Verdict::Residual;
  Decider decided_by = Decider::Accepted;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  double r_out = 0.0;
  std::optional<double> e_n;
};

/**
 * @brief Classifies one node by the purity, minimum-inlier and flatness
 * criteria.
 *
 * Purity failure divides an internal node and sends a leaf's points to the
 * residual list. Too few inliers sends the node to the residual list. A fit
 * that is not flat enough (or rank deficient) divides an internal node and
 * sends a leaf to the residual list. Otherwise the inliers become a plane.
 */
NodeVerdict evaluate_node(const Octree& tree, NodeId id, const LabeledCloud& cloud,
                          const SegmenterConfig& cfg);

struct SegmentOptions {
  std::optional<Point3> origin;            ///< root min corner override
  std::vector<NodeVisit>* trace = nullptr;  ///< filled when non-null
};

/**
 * @brief Breadth-first divide-and-conquer traversal of a built octree.
 *
 * Plane candidates are compared with the accepted planes in insertion order
 * and merged into the first coplanar one, otherwise appended. Residual
 * points (including points outside the octree) then join the nearest plane
 * within cfg.residual_distance, lowest plane id on ties; the plane
 * statistics are updated with the joined points afterwards.
 */
SegmentationResult segment_octree(const Octree& tree, const LabeledCloud& cloud,
                                  const SegmenterConfig& cfg,
                                  std::vector<NodeVisit>* trace = nullptr);

/// Builds the octree and runs segment_octree(), timing both stages.
/// Throws Error for an unlabeled cloud.
SegmentationResult segment(const LabeledCloud& cloud, const SegmenterConfig& cfg,
                           const SegmentOptions& options = {});

}  // namespace planeseg
