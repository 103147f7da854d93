#include "planeseg/sampling.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace planeseg;

namespace {

/// Textbook FPS: recompute every candidate's distance to the selected set.
std::vector<PointIndex> naive_fps(const std::vector<Point3>& pts, std::size_t n) {
  Point3 mean = Point3::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  std::vector<PointIndex> out;
  double best = 1e300;
  PointIndex start = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - mean).squaredNorm();
    if (d < best) {
      best = d;
      start = static_cast<PointIndex>(i);
    }
  }
  out.push_back(start);
  while (out.size() < n) {
    double far = -1.0;
    PointIndex pick = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double dmin = 1e300;
      for (PointIndex s : out) dmin = std::min(dmin, (pts[i] - pts[s]).squaredNorm());
      if (dmin > far) {
        far = dmin;
        pick = static_cast<PointIndex>(i);
      }
    }
    out.push_back(pick);
  }
  return out;
}

}  // namespace

TEST_CASE("voxel downsample of an empty cloud is empty") {
  CHECK(voxel_downsample(LabeledCloud{}, 0.02).empty());
}

TEST_CASE("points inside one voxel collapse to their centroid") {
  LabeledCloud c;
  c.points = {{0.001, 0.001, 0.001}, {0.019, 0.002, 0.003}, {0.01, 0.01, 0.01},
              {0.005, 0.018, 0.0}, {0.0, 0.0, 0.019}};
  Point3 mean = Point3::Zero();
  for (const auto& p : c.points) mean += p;
  mean /= 5.0;
  const LabeledCloud d = voxel_downsample(c, 0.02);
  REQUIRE(d.size() == 1);
  CHECK((d.points[0] - mean).norm() < 1e-15);
}

TEST_CASE("voxel labels follow the majority, ties go to H") {
  LabeledCloud c;
  c.points = {{0.001, 0, 0}, {0.002, 0, 0}, {0.003, 0, 0}, {0.5, 0, 0}, {0.501, 0, 0}};
  c.labels = std::vector<Category>{Category::V, Category::V, Category::H, Category::V, Category::H};
  const LabeledCloud d = voxel_downsample(c, 0.02);
  REQUIRE(d.size() == 2);
  CHECK((*d.labels)[0] == Category::V);
  CHECK((*d.labels)[1] == Category::H);
}

TEST_CASE("random cloud: unique voxels, centroids inside, brute-force groups") {
  std::mt19937_64 rng(1);
  LabeledCloud c;
  c.points = testing::random_points(10000, -0.5, 0.5, rng);
  const double v = 0.07;
  std::map<std::tuple<int, int, int>, std::vector<PointIndex>> oracle;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point3& p = c.points[i];
    oracle[{static_cast<int>(std::floor(p.x() / v)), static_cast<int>(std::floor(p.y() / v)),
            static_cast<int>(std::floor(p.z() / v))}]
        .push_back(static_cast<PointIndex>(i));
  }
  const auto groups = voxel_groups(c, v);
  REQUIRE(groups.size() == oracle.size());
  std::size_t g = 0;
  for (const auto& [key, members] : oracle) CHECK(groups[g++] == members);

  const LabeledCloud d = voxel_downsample(c, v);
  REQUIRE(d.size() == oracle.size());
  std::set<std::tuple<int, int, int>> seen;
  g = 0;
  for (const auto& [key, members] : oracle) {
    const Eigen::Vector3i k = voxel_key(d.points[g], v);
    CHECK(std::make_tuple(k.x(), k.y(), k.z()) == key);
    seen.insert(key);
    ++g;
  }
  CHECK(seen.size() == d.size());
  CHECK(voxel_downsample(d, v).size() == d.size());
}

TEST_CASE("FPS with n = size is a permutation") {
  std::mt19937_64 rng(2);
  LabeledCloud c;
  c.points = testing::random_points(300, 0, 1, rng);
  auto idx = furthest_point_sample_indices(c, c.size(), 4);
  std::sort(idx.begin(), idx.end());
  CHECK(idx == testing::iota_indices(c.size()));
}

TEST_CASE("FPS n = 1 picks the centroid-nearest point") {
  LabeledCloud c;
  c.points = {{0, 0, 0}, {10, 0, 0}, {4.9, 0.1, 0}, {0, 10, 0}};
  const auto idx = furthest_point_sample_indices(c, 1, 0);
  REQUIRE(idx.size() == 1);
  CHECK(idx[0] == 2);
}

TEST_CASE("FPS on square corners returns a diagonal pair") {
  LabeledCloud c;
  c.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto idx = furthest_point_sample_indices(c, 2, seed);
    REQUIRE(idx.size() == 2);
    CHECK((c.points[idx[0]] - c.points[idx[1]]).norm() == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("FPS agrees with the naive greedy oracle on tie-free input") {
  std::mt19937_64 rng(9);
  LabeledCloud c;
  c.points = testing::random_points(400, -1, 1, rng);
  CHECK(furthest_point_sample_indices(c, 60, 123) == naive_fps(c.points, 60));
}

TEST_CASE("FPS is deterministic and rejects oversize requests") {
  std::mt19937_64 rng(3);
  LabeledCloud c;
  c.points = testing::grid_xy(20, 20, 0.01);
  c.labels = std::vector<Category>(c.size(), Category::V);
  const LabeledCloud a = furthest_point_sample(c, 50, 17);
  const LabeledCloud b = furthest_point_sample(c, 50, 17);
  CHECK(a.points == b.points);
  CHECK(a.labels->size() == 50);
  CHECK_THROWS_AS(furthest_point_sample_indices(c, c.size() + 1, 0), Error);
}

TEST_CASE("select keeps order and labels") {
  LabeledCloud c;
  c.points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  c.labels = std::vector<Category>{Category::H, Category::V, Category::H};
  const LabeledCloud s = select(c, {2, 1});
  CHECK(s.points[0].x() == 2);
  CHECK((*s.labels)[1] == Category::V);
}
