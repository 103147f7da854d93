#include "planeseg/metrics.hpp"
#include "planeseg/plane_fit.hpp"

#include "support.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <numbers>
#include <sstream>

using namespace planeseg;

namespace {

/// Two ground-truth planes with 10 points each: ids 0..9 and 10..19.
GroundTruthScene two_plane_gt() {
  GroundTruthScene gt;
  for (int i = 0; i < 20; ++i) {
    gt.cloud.points.emplace_back(0.1 * (i % 10), 0.1 * (i / 10), 0.0);
    gt.gt_plane_id.push_back(i < 10 ? 0 : 1);
  }
  gt.gt_normals = {kUp, Eigen::Vector3d::UnitX()};
  gt.gt_offsets = {0.0, 0.0};
  return gt;
}

Plane plane_with(std::vector<PointIndex> members, const Eigen::Vector3d& n) {
  Plane p;
  p.count = members.size();
  p.point_indices = std::move(members);
  p.normal = n;
  return p;
}

SegmentationResult result_of(std::vector<Plane> planes, std::size_t n_points) {
  SegmentationResult r;
  r.assignment.assign(n_points, kUnassigned);
  for (std::size_t k = 0; k < planes.size(); ++k) {
    for (PointIndex i : planes[k].point_indices) r.assignment[i] = static_cast<std::int32_t>(k);
  }
  for (std::size_t i = 0; i < n_points; ++i) {
    if (r.assignment[i] == kUnassigned) r.residual_indices.push_back(static_cast<PointIndex>(i));
  }
  r.planes = std::move(planes);
  return r;
}

std::vector<PointIndex> range(PointIndex a, PointIndex b) {
  std::vector<PointIndex> v;
  for (PointIndex i = a; i < b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("perfect segmentation") {
  const GroundTruthScene gt = two_plane_gt();
  const auto r = result_of({plane_with(range(0, 10), kUp), plane_with(range(10, 20), Eigen::Vector3d::UnitX())}, 20);
  const auto m = match_planes(r, gt);
  CHECK(m[0] == 0);
  CHECK(m[1] == 1);
  CHECK(directional_error(r, gt) == 0.0);
  CHECK(plane_count_ratio(r, gt) == 100.0);
  CHECK(missing_ratio(r, gt) == 0.0);
}

TEST_CASE("plurality matching, ties to the lower id, empty planes unmatched") {
  const GroundTruthScene gt = two_plane_gt();
  auto members = range(3, 10);
  for (PointIndex i = 10; i < 13; ++i) members.push_back(i);
  auto r = result_of({plane_with(members, kUp)}, 20);
  CHECK(match_planes(r, gt)[0] == 0);

  auto tie = range(5, 15);
  r = result_of({plane_with(tie, kUp)}, 20);
  CHECK(match_planes(r, gt)[0] == 0);

  r.planes.push_back(plane_with({}, kUp));
  CHECK_FALSE(match_planes(r, gt)[1].has_value());
}

TEST_CASE("tilted normal gives its angle; sign flips do not matter") {
  const GroundTruthScene gt = two_plane_gt();
  const double a = 1.0 * std::numbers::pi / 180.0;
  const Eigen::Vector3d tilted(std::sin(a), 0.0, std::cos(a));
  const auto r = result_of({plane_with(range(0, 10), -tilted)}, 20);
  CHECK(directional_error(r, gt) == doctest::Approx(1.0));
}

TEST_CASE("count and missing ratios") {
  const GroundTruthScene gt = two_plane_gt();
  std::vector<Plane> planes;
  for (PointIndex k = 0; k < 4; ++k) planes.push_back(plane_with(range(k * 3, k * 3 + 3), kUp));
  const auto r = result_of(planes, 20);
  CHECK(plane_count_ratio(r, gt) == doctest::Approx(200.0));
  CHECK(missing_ratio(r, gt) == doctest::Approx(40.0));

  GroundTruthScene six;
  six.gt_normals.assign(6, kUp);
  six.gt_offsets.assign(6, 0.0);
  six.gt_plane_id.assign(100, 0);
  std::vector<Plane> eight;
  for (PointIndex k = 0; k < 8; ++k) eight.push_back(plane_with(range(k * 9, k * 9 + 9), kUp));
  const auto r8 = result_of(eight, 100);
  CHECK(plane_count_ratio(r8, six) == doctest::Approx(133.333).epsilon(1e-4));
  CHECK(missing_ratio(r8, six) == doctest::Approx(28.0));
}

TEST_CASE("metric errors") {
  const GroundTruthScene gt = two_plane_gt();
  const auto none = result_of({}, 20);
  CHECK_THROWS_AS(directional_error(none, gt), Error);
  GroundTruthScene empty;
  CHECK_THROWS_AS(plane_count_ratio(none, empty), Error);
  CHECK_THROWS_AS(missing_ratio(none, empty), Error);
}

TEST_CASE("metrics are invariant to plane id permutation") {
  const GroundTruthScene gt = two_plane_gt();
  const Eigen::Vector3d n1 = Eigen::Vector3d(0.1, 0, 1).normalized();
  const Eigen::Vector3d n2 = Eigen::Vector3d(1, 0.2, 0).normalized();
  const auto a = result_of({plane_with(range(0, 8), n1), plane_with(range(10, 19), n2)}, 20);
  const auto b = result_of({plane_with(range(10, 19), n2), plane_with(range(0, 8), n1)}, 20);
  CHECK(directional_error(a, gt) == doctest::Approx(directional_error(b, gt)));
  CHECK(plane_count_ratio(a, gt) == plane_count_ratio(b, gt));
  CHECK(missing_ratio(a, gt) == missing_ratio(b, gt));
  const auto ma = match_planes(a, gt), mb = match_planes(b, gt);
  CHECK(ma[0] == mb[1]);
  CHECK(ma[1] == mb[0]);
}

TEST_CASE("evaluate_scene and aggregate average per-scene values") {
  const GroundTruthScene gt = two_plane_gt();
  const auto good = result_of({plane_with(range(0, 10), kUp), plane_with(range(10, 20), Eigen::Vector3d::UnitX())}, 20);
  const auto half = result_of({plane_with(range(0, 10), kUp)}, 20);
  const SceneEval e1 = evaluate_scene(good, gt, "a");
  const SceneEval e2 = evaluate_scene(half, gt, "b");
  CHECK(e2.r_p_percent == 50.0);
  CHECK(e2.r_m_percent == 50.0);
  CHECK(e2.matched == 1);
  CHECK(e2.gt_planes == 2);
  const EvalReport rep = aggregate({e1, e2}, {StageTimings{0, 2, 1, 1}, StageTimings{0, 4, 1, 1}});
  CHECK(rep.r_p_percent == 75.0);
  CHECK(rep.r_m_percent == 25.0);
  CHECK(rep.alpha_deg == 0.0);
  CHECK(rep.per_scene.size() == 2);
  CHECK(rep.timings_ms.classify_ms == doctest::Approx(3.0));
  CHECK(rep.fps == doctest::Approx(200.0));

  // A scene without matches counts for r_p and r_m but not alpha.
  const SceneEval e3 = evaluate_scene(result_of({}, 20), gt, "c");
  const EvalReport rep2 = aggregate({e1, e3});
  CHECK(rep2.alpha_deg == 0.0);
  CHECK(rep2.r_m_percent == 50.0);
}

TEST_CASE("result_from_assignment rebuilds planes by PCA") {
  LabeledCloud c;
  c.points = testing::grid_xy(4, 4, 0.1);
  std::vector<std::int32_t> a(16, 0);
  a[15] = kUnassigned;
  a[14] = 1;
  const auto r = result_from_assignment(c, a);
  REQUIRE(r.planes.size() == 2);
  CHECK(r.planes[0].count == 14);
  CHECK((r.planes[0].normal - kUp).norm() < 1e-9);
  CHECK(r.planes[1].count == 1);
  CHECK(r.residual_indices == std::vector<PointIndex>{15});
  std::vector<std::int32_t> wrong(3, 0);
  CHECK_THROWS_AS(result_from_assignment(c, wrong), Error);
}

TEST_CASE("metric table and CSV") {
  EvalReport r;
  r.alpha_deg = 0.1234;
  r.r_p_percent = 101.0;
  r.r_m_percent = 0.05;
  r.fps = 33.3;
  std::ostringstream table, csv;
  print_metric_table(table, {"a-very-long-column-name"}, {r});
  CHECK(table.str().find("alpha (deg)") != std::string::npos);
  CHECK(table.str().find("0.12") != std::string::npos);
  CHECK(table.str().find(" a-very-long-column-name") != std::string::npos);
  write_metric_csv(csv, {"x"}, {r});
  CHECK(csv.str() == "column,alpha_deg,r_p_percent,r_m_percent,fps\nx,0.1234,101.0000,0.0500,33.30\n");
}
