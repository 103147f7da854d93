#include "planeseg/segmenter.hpp"

#include "planeseg/plane_fit.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>

namespace planeseg {

InlierSplit split_inliers(std::span<const PointIndex> indices, const std::vector<Category>& labels) {
  if (indices.empty()) throw Error("split_inliers: empty node");
  std::size_t n_v = 0;
  for (PointIndex i : indices) n_v += labels[i] == Category::V;
  InlierSplit s;
  s.majority = 2 * n_v > indices.size() ? Category::V : Category::H;
  s.inliers.reserve(s.majority == Category::V ? n_v : indices.size() - n_v);
  s.outliers.reserve(s.majority == Category::V ? indices.size() - n_v : n_v);
  for (PointIndex i : indices) (labels[i] == s.majority ? s.inliers : s.outliers).push_back(i);
  return s;
}

InlierSplit split_inliers(const Octree& tree, NodeId id, const LabeledCloud& cloud) {
  if (!cloud.has_labels()) throw Error("split_inliers: cloud has no labels");
  return split_inliers(tree.point_indices(id), *cloud.labels);
}

bool purity_ok(std::size_t n_out, double r_out, const SegmenterConfig& cfg) noexcept {
  return n_out <= cfg.theta_n_out && r_out <= cfg.theta_r_out;
}

bool min_inliers_ok(std::size_t n_in, const SegmenterConfig& cfg) noexcept {
  return n_in >= cfg.theta_n_in;
}

bool plane_candidate_ok(double e_n, const SegmenterConfig& cfg) noexcept {
  return e_n <= cfg.theta_e_n;
}

double node_fit_error(const Plane& fit) noexcept {
  return fit.mse_normal * static_cast<double>(fit.count);
}

NodeVerdict evaluate_node(const Octree& tree, NodeId id, const LabeledCloud& cloud,
                          const SegmenterConfig& cfg) {
  const OctreeNode& node = tree.node(id);
  InlierSplit split = split_inliers(tree, id, cloud);
  NodeVerdict v;
  v.n_in = split.inliers.size();
  v.n_out = split.outliers.size();
  v.r_out = static_cast<double>(v.n_out) / static_cast<double>(node.size());
  const bool leaf = node.is_leaf();

  if (!purity_ok(v.n_out, v.r_out, cfg)) {
    v.decided_by = Decider::Purity;
    v.kind = leaf ? Verdict::Residual : Verdict::Divide;
    return v;
  }
  // A plane needs three points whatever theta_n_in says.
  if (!min_inliers_ok(v.n_in, cfg) || v.n_in < 3) {
    v.decided_by = Decider::MinInliers;
    v.kind = Verdict::Residual;
    return v;
  }
  std::optional<Plane> plane;
  try {
    plane = fit_plane_pca(cloud.points, split.inliers, cfg.gravity);
    v.e_n = node_fit_error(*plane);
  } catch (const Error&) {
    // Rank-deficient inliers cannot define a plane; handled like a bad fit.
  }
  if (!plane || !plane_candidate_ok(*v.e_n, cfg)) {
    v.decided_by = Decider::PlaneFit;
    v.kind = leaf ? Verdict::Residual : Verdict::Divide;
    return v;
  }
  v.decided_by = Decider::Accepted;
  v.kind = Verdict::ConquerPlane;
  v.plane = std::move(plane);
  v.outlier_indices = std::move(split.outliers);
  return v;
}

SegmentationResult segment_octree(const Octree& tree, const LabeledCloud& cloud,
                                  const SegmenterConfig& cfg, std::vector<NodeVisit>* trace) {
  if (!cloud.has_labels()) throw Error("segmentation needs a labeled cloud");
  SegmentationResult result;
  std::vector<Plane>& planes = result.planes;
  std::vector<PointIndex> residual = tree.dropped_indices();

  std::deque<NodeId> queue;
  if (tree.root().size() > 0) queue.push_back(Octree::root_id());
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    NodeVerdict v = evaluate_node(tree, id, cloud, cfg);
    if (trace) {
      trace->push_back({id, tree.node(id).is_leaf(), v.kind, v.decided_by, v.n_in, v.n_out,
                        v.r_out, v.e_n});
    }
    switch (v.kind) {
      case Verdict::Divide:
        for (NodeId c : tree.children_of(id)) queue.push_back(c);
        break;
      case Verdict::Residual: {
        const auto idx = tree.point_indices(id);
        residual.insert(residual.end(), idx.begin(), idx.end());
        break;
      }
      case Verdict::ConquerPlane: {
        residual.insert(residual.end(), v.outlier_indices.begin(), v.outlier_indices.end());
        Plane& candidate = *v.plane;
        auto match = std::find_if(planes.begin(), planes.end(),
                                  [&](const Plane& p) { return coplanar_ok(p, candidate, cfg); });
        if (match != planes.end()) {
          merge_into(*match, std::move(candidate), cfg.gravity);
        } else {
          planes.push_back(std::move(candidate));
        }
        break;
      }
    }
  }

  // Residual assignment against the frozen post-merge planes.
  std::sort(residual.begin(), residual.end());
  std::vector<std::int32_t> target(residual.size(), kUnassigned);
  for (std::size_t r = 0; r < residual.size(); ++r) {
    const Point3& p = cloud.points[residual[r]];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < planes.size(); ++k) {
      const double d = point_plane_distance(p, planes[k]);
      if (d <= cfg.residual_distance && d < best) {
        best = d;
        target[r] = static_cast<std::int32_t>(k);
      }
    }
  }
  std::vector<bool> touched(planes.size(), false);
  for (std::size_t r = 0; r < residual.size(); ++r) {
    if (target[r] == kUnassigned) {
      result.residual_indices.push_back(residual[r]);
      continue;
    }
    absorb_point(planes[target[r]], residual[r], cloud.points[residual[r]]);
    touched[target[r]] = true;
  }
  for (std::size_t k = 0; k < planes.size(); ++k) {
    if (touched[k]) refresh_plane(planes[k], cfg.gravity);
  }

  result.assignment.assign(cloud.size(), kUnassigned);
  for (std::size_t k = 0; k < planes.size(); ++k) {
    for (PointIndex i : planes[k].point_indices) result.assignment[i] = static_cast<std::int32_t>(k);
  }
  return result;
}

SegmentationResult segment(const LabeledCloud& cloud, const SegmenterConfig& cfg,
                           const SegmentOptions& options) {
  if (!cloud.has_labels()) throw Error("segmentation needs a labeled cloud");
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const Octree tree = Octree::build(cloud, cfg, options.origin);
  const auto t1 = Clock::now();
  SegmentationResult result = segment_octree(tree, cloud, cfg, options.trace);
  const auto t2 = Clock::now();
  result.timings.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  result.timings.segment_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return result;
}

}  // namespace planeseg
