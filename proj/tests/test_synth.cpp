#include "planeseg/synth.hpp"

#include "support.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <numbers>
#include <sstream>

using namespace planeseg;

namespace {

std::vector<std::size_t> plane_sizes(const GroundTruthScene& s) {
  std::vector<std::size_t> n(s.plane_count());
  for (auto id : s.gt_plane_id) ++n[static_cast<std::size_t>(id)];
  return n;
}

Point3 plane_centroid(const GroundTruthScene& s, std::int32_t k) {
  Point3 c = Point3::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.cloud.size(); ++i) {
    if (s.gt_plane_id[i] != k) continue;
    c += s.cloud.points[i];
    ++n;
  }
  return c / static_cast<double>(n);
}

}  // namespace

TEST_CASE("one-step staircase has a tread and a riser") {
  const GroundTruthScene s = gen_staircase({1, 0.3, 1.0, 0.2}, 5000, 0);
  CHECK(s.plane_count() == 2);
  CHECK_NOTHROW(check_scene(s));
  std::size_t h = 0;
  for (std::size_t k = 0; k < 2; ++k) h += s.gt_normals[k].z() > 0.5;
  CHECK(h == 1);
}

TEST_CASE("three-step staircase geometry") {
  const GroundTruthScene s = gen_staircase({3, 0.3, 1.0, 0.2}, 5000, 1);
  CHECK(s.plane_count() == 6);
  double top = -1.0;
  for (std::size_t k = 0; k < s.plane_count(); ++k) {
    if (s.gt_normals[k] == kUp) top = std::max(top, plane_centroid(s, static_cast<std::int32_t>(k)).z());
  }
  CHECK(top == doctest::Approx(0.6));
  CHECK(max_plane_residual(s) < 1e-9);
  for (std::size_t i = 0; i < s.cloud.size(); ++i) {
    const bool horizontal = s.gt_normals[static_cast<std::size_t>(s.gt_plane_id[i])].z() > 0.5;
    CHECK((*s.cloud.labels)[i] == (horizontal ? Category::H : Category::V));
  }
}

TEST_CASE("staircase is deterministic per seed and validates its input") {
  const GroundTruthScene a = gen_staircase({2, 0.25, 0.5, 0.15}, 3000, 9);
  const GroundTruthScene b = gen_staircase({2, 0.25, 0.5, 0.15}, 3000, 9);
  CHECK(a.cloud.points == b.cloud.points);
  CHECK(a.gt_plane_id == b.gt_plane_id);
  CHECK_THROWS_AS(gen_staircase({0, 0.3, 1, 0.2}, 1000, 0), Error);
  CHECK_THROWS_AS(gen_staircase({2, -0.3, 1, 0.2}, 1000, 0), Error);
  CHECK_THROWS_AS(gen_staircase({2, 0.3, 1, 0.2}, 0.0, 0), Error);
}

TEST_CASE("box faces") {
  const GroundTruthScene s = gen_box({1, 1, 1}, 2000, 0);
  CHECK(s.plane_count() == 5);
  CHECK(s.gt_normals[0] == kUp);
  CHECK(max_plane_residual(s) < 1e-9);
  CHECK_THROWS_AS(gen_box({1, 0, 1}, 2000, 0), Error);

  const double l = 0.8, w = 0.6, h = 0.1, density = 20000;
  const GroundTruthScene low = gen_box({l, w, h}, density, 3);
  const auto sizes = plane_sizes(low);
  std::size_t sides = 0;
  for (std::size_t k = 1; k < 5; ++k) sides += sizes[k];
  const double expected = density * 2.0 * (l + w) * h;
  CHECK(std::abs(static_cast<double>(sides) - expected) <= 0.1 * expected);
}

TEST_CASE("single planes and the 45 degree label boundary") {
  const GroundTruthScene flat = gen_plane({1, 1, 1.0}, 1000, 0);
  CHECK((*flat.cloud.labels)[0] == Category::H);
  CHECK((flat.gt_normals[0] - kUp).norm() < 1e-12);
  const GroundTruthScene wall = gen_plane({1, 1, 0.0}, 1000, 0);
  CHECK((*wall.cloud.labels)[0] == Category::V);
  // The exact boundary is nz = sqrt(1/2); 0.7071 is just below it.
  const GroundTruthScene edge = gen_plane({1, 1, std::sqrt(0.5)}, 1000, 0);
  CHECK((*edge.cloud.labels)[0] == Category::H);
  const GroundTruthScene tilted = gen_plane({1, 1, -0.3}, 1000, 4);
  CHECK(max_plane_residual(tilted) < 1e-9);
  CHECK(tilted.gt_normals[0].z() == doctest::Approx(-0.3));
  CHECK_THROWS_AS(gen_plane({1, 1, 1.5}, 1000, 0), Error);
}

TEST_CASE("noise: identity at zero, chi-distribution RMS, reproducible") {
  const GroundTruthScene s = gen_plane({2, 2, 1.0}, 3000, 1);
  CHECK(add_noise(s, 0.0, 5).cloud.points == s.cloud.points);
  const double sigma = 0.003;
  const GroundTruthScene n = add_noise(s, sigma, 5);
  double sq = 0.0;
  for (std::size_t i = 0; i < s.cloud.size(); ++i) sq += (n.cloud.points[i] - s.cloud.points[i]).squaredNorm();
  const double rms = std::sqrt(sq / static_cast<double>(s.cloud.size()));
  CHECK(s.cloud.size() >= 10000);
  CHECK(std::abs(rms - sigma * std::sqrt(3.0)) <= 0.05 * sigma * std::sqrt(3.0));
  CHECK(add_noise(s, sigma, 5).cloud.points == n.cloud.points);
  CHECK(n.gt_plane_id == s.gt_plane_id);
  CHECK_THROWS_AS(add_noise(s, -1.0, 0), Error);
}

TEST_CASE("augmentation ops") {
  const GroundTruthScene s = gen_box({0.5, 0.5, 0.2}, 5000, 2);

  AugmentOps turn;
  turn.rotate_z = true;
  turn.rotate_angle = std::numbers::pi / 2;
  const GroundTruthScene r = augment(s, turn, 0);
  for (std::size_t k = 0; k < s.plane_count(); ++k) {
    const Eigen::Vector3d& n = s.gt_normals[k];
    CHECK((r.gt_normals[k] - Eigen::Vector3d(-n.y(), n.x(), n.z())).norm() < 1e-12);
  }
  CHECK(max_plane_residual(r) < 1e-9);

  CHECK(augment(s, AugmentOps{}, 3).cloud.points == s.cloud.points);

  AugmentOps jitter;
  jitter.jitter = 0.01;
  const GroundTruthScene j = augment(s, jitter, 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.cloud.size(); ++i) worst = std::max(worst, (j.cloud.points[i] - s.cloud.points[i]).cwiseAbs().maxCoeff());
  CHECK(worst <= 0.01);
  CHECK(worst > 0.009);

  AugmentOps drop;
  drop.drop_clusters = 3;
  drop.drop_radius = 0.05;
  const GroundTruthScene d = augment(s, drop, 5);
  CHECK(d.cloud.size() < s.cloud.size());
  CHECK_NOTHROW(check_scene(d));
}

TEST_CASE("evaluation suite ranges and determinism") {
  const auto a = gen_eval_suite(100, 7, 200);
  const auto b = gen_eval_suite(100, 7, 200);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& spec = std::get<StaircaseSpec>(a[i].spec);
    CHECK(spec.steps >= 2);
    CHECK(spec.steps <= 6);
    CHECK(spec.length >= 0.2);
    CHECK(spec.length <= 0.4);
    CHECK(spec.width >= 0.3);
    CHECK(spec.width <= 1.5);
    CHECK(spec.height >= 0.1);
    CHECK(spec.height <= 0.3);
    CHECK(a[i].plane_count() == static_cast<std::size_t>(2 * spec.steps));
    CHECK(a[i].cloud.points == b[i].cloud.points);
  }
  CHECK_THROWS_AS(gen_eval_suite(0, 1), Error);
}

TEST_CASE("subsample keeps ground truth aligned") {
  const GroundTruthScene s = gen_staircase({2, 0.3, 0.5, 0.2}, 2000, 3);
  const GroundTruthScene sub = subsample(s, {5, 1, 3});
  REQUIRE(sub.cloud.size() == 3);
  CHECK(sub.cloud.points[0] == s.cloud.points[5]);
  CHECK(sub.gt_plane_id[2] == s.gt_plane_id[3]);
  CHECK(sub.plane_count() == s.plane_count());
}

TEST_CASE("ground-truth sidecar round-trip and errors") {
  const GroundTruthScene s = gen_staircase({2, 0.3, 0.5, 0.2}, 1000, 3);
  std::stringstream ss;
  write_ground_truth(ss, s);
  const GroundTruthScene back = read_ground_truth(ss);
  CHECK(back.gt_plane_id == s.gt_plane_id);
  REQUIRE(back.plane_count() == s.plane_count());
  for (std::size_t k = 0; k < s.plane_count(); ++k) {
    CHECK(back.gt_normals[k] == s.gt_normals[k]);
    CHECK(back.gt_offsets[k] == s.gt_offsets[k]);
  }
  std::istringstream bad_magic("something 1\n");
  CHECK_THROWS_AS(read_ground_truth(bad_magic), Error);
  std::istringstream bad_id("planeseg-ground-truth 1\nplanes 1\n0 0 1 0\npoints 2\n0\n3\n");
  CHECK_THROWS_WITH_AS(read_ground_truth(bad_id), doctest::Contains("out of range"), Error);
  std::istringstream short_ids("planeseg-ground-truth 1\nplanes 1\n0 0 1 0\npoints 2\n0\n");
  CHECK_THROWS_AS(read_ground_truth(short_ids), Error);
}

TEST_CASE("check_scene catches inconsistent scenes") {
  GroundTruthScene s = gen_staircase({1, 0.3, 0.5, 0.2}, 500, 3);
  s.gt_plane_id[0] = 7;
  CHECK_THROWS_AS(check_scene(s), Error);
  s.gt_plane_id.pop_back();
  CHECK_THROWS_AS(check_scene(s), Error);
}
