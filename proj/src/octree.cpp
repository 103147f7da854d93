#include "planeseg/octree.hpp"

#include <cmath>
#include <ostream>

namespace planeseg {

bool OctreeNode::is_leaf() const noexcept {
  for (NodeId c : children) {
    if (c != kNoNode) return false;
  }
  return true;
}

Octree Octree::build(const LabeledCloud& cloud, const SegmenterConfig& cfg,
                     std::optional<Point3> origin) {
  if (cloud.empty()) throw Error("cannot build an octree from an empty cloud");
  if (!cloud.has_labels()) throw Error("octree construction needs labeled points");
  check_cloud(cloud);
  if (!(cfg.octree_extent > 0.0)) throw Error("octree extent must be positive");
  if (cfg.octree_max_depth < 1) throw Error("octree depth must be positive");

  Octree tree;
  tree.max_depth_ = cfg.octree_max_depth;
  tree.extent_ = cfg.octree_extent;
  if (origin) {
    tree.origin_ = *origin;
  } else {
    Point3 lo = cloud.points[0], hi = cloud.points[0];
    for (const auto& p : cloud.points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    tree.origin_ = 0.5 * (lo + hi) - Point3::Constant(0.5 * tree.extent_);
  }

  OctreeNode root;
  root.bounds_min = tree.origin_;
  root.bounds_max = tree.origin_ + Point3::Constant(tree.extent_);
  tree.nodes_.push_back(root);

  const auto& labels = *cloud.labels;
  const std::size_t n = cloud.size();
  std::vector<NodeId> leaf_of(n, kNoNode);

  // Pass 1: create the path of every point and accumulate label counts.
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& p = cloud.points[i];
    if ((p.array() < root.bounds_min.array()).any() || (p.array() > root.bounds_max.array()).any()) {
      tree.dropped_.push_back(static_cast<PointIndex>(i));
      continue;
    }
    const bool is_h = labels[i] == Category::H;
    NodeId id = root_id();
    for (int d = 0;; ++d) {
      OctreeNode& node = tree.nodes_[static_cast<std::size_t>(id)];
      (is_h ? node.count_h : node.count_v) += 1;
      if (d == tree.max_depth_) break;
      const Point3 mid = node.center();
      const int octant = (p.x() >= mid.x() ? 1 : 0) | (p.y() >= mid.y() ? 2 : 0) |
                         (p.z() >= mid.z() ? 4 : 0);
      NodeId child = node.children[octant];
      if (child == kNoNode) {
        const double half = std::ldexp(tree.extent_, -(d + 1));
        OctreeNode c;
        c.depth = d + 1;
        c.parent = id;
        c.octant = octant;
        c.bounds_min = node.bounds_min + Point3((octant & 1) ? half : 0.0,
                                                (octant & 2) ? half : 0.0,
                                                (octant & 4) ? half : 0.0);
        c.bounds_max = c.bounds_min + Point3::Constant(half);
        child = static_cast<NodeId>(tree.nodes_.size());
        node.children[octant] = child;  // `node` is invalidated by push_back below
        tree.nodes_.push_back(c);
      }
      id = child;
    }
    leaf_of[i] = id;
  }

  // Pass 2: lay the index sets out contiguously, input order per node.
  tree.first_.resize(tree.nodes_.size() + 1);
  tree.first_[0] = 0;
  for (std::size_t k = 0; k < tree.nodes_.size(); ++k) {
    tree.first_[k + 1] = tree.first_[k] + static_cast<std::uint32_t>(tree.nodes_[k].size());
  }
  tree.indices_.resize(tree.first_.back());
  std::vector<std::uint32_t> cursor(tree.first_.begin(), tree.first_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId id = leaf_of[i]; id != kNoNode; id = tree.nodes_[static_cast<std::size_t>(id)].parent) {
      tree.indices_[cursor[static_cast<std::size_t>(id)]++] = static_cast<PointIndex>(i);
    }
  }
  return tree;
}

std::span<const PointIndex> Octree::point_indices(NodeId id) const {
  const auto k = static_cast<std::size_t>(id);
  return std::span<const PointIndex>(indices_).subspan(first_.at(k), first_.at(k + 1) - first_[k]);
}

std::vector<NodeId> Octree::children_of(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId c : node(id).children) {
    if (c != kNoNode) out.push_back(c);
  }
  return out;
}

std::vector<Point3> Octree::node_points(NodeId id, const LabeledCloud& cloud) const {
  std::vector<Point3> out;
  const auto idx = point_indices(id);
  out.reserve(idx.size());
  for (PointIndex i : idx) out.push_back(cloud.points.at(i));
  return out;
}

std::string Octree::octant_path(NodeId id) const {
  std::string path;
  for (NodeId k = id; node(k).parent != kNoNode; k = node(k).parent) {
    path.insert(path.begin(), static_cast<char>('0' + node(k).octant));
  }
  return path;
}

double Octree::leaf_edge() const noexcept { return std::ldexp(extent_, -max_depth_); }

void Octree::dump(std::ostream& out) const {
  std::vector<NodeId> stack{root_id()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const OctreeNode& nd = node(id);
    const std::string path = octant_path(id);
    out << nd.depth << ' ' << (path.empty() ? "-" : path) << ' ' << nd.count_h << ' '
        << nd.count_v << '\n';
    for (int c = 7; c >= 0; --c) {
      if (nd.children[c] != kNoNode) stack.push_back(nd.children[c]);
    }
  }
}

}  // namespace planeseg
