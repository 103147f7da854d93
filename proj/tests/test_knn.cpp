#include "planeseg/knn.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace planeseg;

TEST_CASE("grid kNN matches brute force on random clouds") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {1u, 7u, 50u, 2000u}) {
    const auto pts = testing::random_points(n, -1.0, 1.0, rng);
    const KnnGrid grid(pts);
    std::vector<PointIndex> got;
    for (std::size_t q = 0; q < std::min<std::size_t>(n, 100); ++q) {
      for (std::size_t k : {1u, 5u, 16u}) {
        grid.query(pts[q], k, got);
        CHECK(got == testing::brute_knn(pts, pts[q], k));
      }
    }
    const auto outside = testing::random_points(20, -3.0, 3.0, rng);
    for (const auto& q : outside) {
      grid.query(q, 8, got);
      CHECK(got == testing::brute_knn(pts, q, 8));
    }
  }
}

TEST_CASE("grid kNN on a flat, anisotropic cloud with duplicate points") {
  auto pts = testing::grid_xy(40, 3, 0.01);
  pts.push_back(pts[5]);
  pts.push_back(pts[5]);
  const KnnGrid grid(pts);
  std::vector<PointIndex> got;
  for (std::size_t q = 0; q < pts.size(); q += 7) {
    grid.query(pts[q], 16, got);
    CHECK(got == testing::brute_knn(pts, pts[q], 16));
  }
}

TEST_CASE("a point of the set is its own nearest neighbour") {
  const auto pts = testing::grid_xy(10, 10, 0.02);
  const KnnGrid grid(pts);
  std::vector<PointIndex> got;
  grid.query(pts[37], 1, got);
  REQUIRE(got.size() == 1);
  CHECK(got[0] == 37);
  CHECK(grid.cell_size() > 0.0);
}
