#include "planeseg/octree.hpp"
#include "planeseg/sampling.hpp"
#include "planeseg/synth.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>
#include <sstream>

using namespace planeseg;

namespace {

/// Walks every node, checks its invariants and recounts children.
void check_tree(const Octree& t, const LabeledCloud& cloud) {
  for (std::size_t n = 0; n < t.node_count(); ++n) {
    const NodeId id = static_cast<NodeId>(n);
    const OctreeNode& nd = t.node(id);
    const Point3 edge = nd.bounds_max - nd.bounds_min;
    CHECK(std::abs(edge.x() - edge.y()) < 1e-12);
    CHECK(std::abs(edge.x() - edge.z()) < 1e-12);
    CHECK(nd.depth <= t.max_depth());
    const auto idx = t.point_indices(id);
    CHECK(idx.size() == nd.size());
    std::size_t h = 0;
    for (PointIndex i : idx) {
      h += (*cloud.labels)[i] == Category::H;
      const Point3& p = cloud.points[i];
      CHECK((p.array() >= nd.bounds_min.array()).all());
      CHECK((p.array() <= nd.bounds_max.array()).all());
    }
    CHECK(h == nd.count_h);
    const auto kids = t.children_of(id);
    if (kids.empty()) continue;
    std::size_t ch = 0, cv = 0;
    std::vector<PointIndex> united;
    for (NodeId c : kids) {
      const OctreeNode& k = t.node(c);
      CHECK(k.parent == id);
      CHECK(k.depth == nd.depth + 1);
      const Point3 expect_min = nd.bounds_min + 0.5 * edge.cwiseProduct(Point3(k.octant & 1, (k.octant >> 1) & 1, (k.octant >> 2) & 1));
      CHECK((k.bounds_min - expect_min).norm() < 1e-12);
      ch += k.count_h;
      cv += k.count_v;
      const auto ci = t.point_indices(c);
      united.insert(united.end(), ci.begin(), ci.end());
    }
    CHECK(ch == nd.count_h);
    CHECK(cv == nd.count_v);
    std::sort(united.begin(), united.end());
    std::vector<PointIndex> mine(idx.begin(), idx.end());
    std::sort(mine.begin(), mine.end());
    CHECK(united == mine);
  }
}

}  // namespace

TEST_CASE("a single point makes one chain down to max depth") {
  const LabeledCloud c = testing::labeled({Point3(0.3, -0.2, 1.0)}, Category::H);
  const Octree t = Octree::build(c, default_config());
  CHECK(t.root().size() == 1);
  CHECK(t.node_count() == 8);
  NodeId id = Octree::root_id();
  int depth = 0;
  while (!t.children_of(id).empty()) {
    CHECK(t.children_of(id).size() == 1);
    id = t.children_of(id)[0];
    ++depth;
  }
  CHECK(depth == 7);
  CHECK(t.node(id).is_leaf());
  CHECK(t.leaf_edge() == doctest::Approx(3.2 / 128));
}

TEST_CASE("root is centered on the bounding box") {
  const LabeledCloud c = testing::labeled({Point3(0, 0, 0), Point3(1, 2, 0.5)}, Category::H);
  const Octree t = Octree::build(c, default_config());
  CHECK((t.root().center() - Point3(0.5, 1.0, 0.25)).norm() < 1e-12);
  CHECK(t.extent() == 3.2);
  CHECK((t.origin() - Point3(0.5 - 1.6, 1.0 - 1.6, 0.25 - 1.6)).norm() < 1e-12);
}

TEST_CASE("opposite corners occupy octants 0 and 7") {
  const LabeledCloud c = testing::labeled({Point3(-1, -1, -1), Point3(1, 1, 1)}, Category::V);
  const Octree t = Octree::build(c, default_config());
  const auto kids = t.children_of(Octree::root_id());
  REQUIRE(kids.size() == 2);
  CHECK(t.node(kids[0]).octant == 0);
  CHECK(t.node(kids[1]).octant == 7);
  CHECK(t.root().count_v == 2);
}

TEST_CASE("explicit origin, out-of-bounds points and the closed root face") {
  const LabeledCloud c =
      testing::labeled({Point3(0, 0, 0), Point3(3.2, 3.2, 3.2), Point3(3.3, 0, 0), Point3(-0.01, 1, 1)}, Category::H);
  const Octree t = Octree::build(c, default_config(), Point3::Zero());
  CHECK(t.root().size() == 2);
  CHECK(t.dropped_indices() == std::vector<PointIndex>{2, 3});
  CHECK(t.root().size() + t.dropped_indices().size() == c.size());
  check_tree(t, c);
}

TEST_CASE("points on an internal split plane go to the high octant") {
  SegmenterConfig cfg = default_config();
  cfg.octree_max_depth = 1;
  const LabeledCloud c = testing::labeled({Point3(1.6, 0.1, 0.1)}, Category::H);
  const Octree t = Octree::build(c, cfg, Point3::Zero());
  const auto kids = t.children_of(Octree::root_id());
  REQUIRE(kids.size() == 1);
  CHECK(t.node(kids[0]).octant == 1);
}

TEST_CASE("children_of: one octant, all octants, leaf") {
  SegmenterConfig cfg = default_config();
  cfg.octree_max_depth = 2;
  std::mt19937_64 rng(3);
  const auto corner = testing::random_points(50, 0.1, 0.7, rng);
  const Octree a = Octree::build(testing::labeled(corner, Category::H), cfg, Point3::Zero());
  CHECK(a.children_of(Octree::root_id()).size() == 1);

  const auto cube = testing::random_points(2000, 0.0, 3.2, rng);
  const Octree b = Octree::build(testing::labeled(cube, Category::H), cfg, Point3::Zero());
  CHECK(b.children_of(Octree::root_id()).size() == 8);
  for (std::size_t n = 0; n < b.node_count(); ++n) {
    if (b.node(static_cast<NodeId>(n)).depth == 2) CHECK(b.children_of(static_cast<NodeId>(n)).empty());
  }
}

TEST_CASE("staircase tree recount and bounds oracle") {
  GroundTruthScene s = gen_staircase({3, 0.3, 1.0, 0.2}, 20000, 1);
  const LabeledCloud c = furthest_point_sample(s.cloud, 8192, 0);
  const Octree t = Octree::build(c, default_config());
  CHECK(t.root().size() == 8192);
  check_tree(t, c);
  CHECK(t.node_points(Octree::root_id(), c).size() == 8192);
}

TEST_CASE("node_points keeps input order") {
  const LabeledCloud c = testing::labeled(testing::grid_xy(4, 4, 0.1), Category::H);
  const Octree t = Octree::build(c, default_config());
  const auto pts = t.node_points(Octree::root_id(), c);
  CHECK(pts == c.points);
}

TEST_CASE("dump lists every node depth-first with paths") {
  const LabeledCloud c = testing::labeled({Point3(-1, -1, -1), Point3(1, 1, 1)}, Category::V);
  SegmenterConfig cfg = default_config();
  cfg.octree_max_depth = 2;
  const Octree t = Octree::build(c, cfg);
  std::ostringstream out;
  t.dump(out);
  CHECK(out.str() == "0 - 0 2\n1 0 0 1\n2 00 0 1\n1 7 0 1\n2 77 0 1\n");
  CHECK(t.octant_path(4) == "77");
}

TEST_CASE("build errors") {
  CHECK_THROWS_AS(Octree::build(LabeledCloud{}, default_config()), Error);
  LabeledCloud unlabeled;
  unlabeled.points = {Point3::Zero()};
  CHECK_THROWS_AS(Octree::build(unlabeled, default_config()), Error);
  SegmenterConfig cfg = default_config();
  cfg.octree_extent = 0.0;
  CHECK_THROWS_AS(Octree::build(testing::labeled({Point3::Zero()}, Category::H), cfg), Error);
}
