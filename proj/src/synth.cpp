#include "planeseg/synth.hpp"

#include "planeseg/classify.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace planeseg {
namespace {

/// Accumulates faces of a scene.
class SceneBuilder {
 public:
  SceneBuilder(double density, std::uint64_t seed) : density_(density), rng_(seed) {
    if (!(density > 0.0)) throw Error("density must be positive");
    scene_.cloud.labels.emplace();
  }

  /// Samples origin + a*u + b*v, a in [0, la], b in [0, lb].
  void add_face(const Point3& origin, const Eigen::Vector3d& u, double la,
                const Eigen::Vector3d& v, double lb, const Eigen::Vector3d& normal) {
    const auto id = static_cast<std::int32_t>(scene_.gt_normals.size());
    scene_.gt_normals.push_back(normal);
    scene_.gt_offsets.push_back(normal.dot(origin));
    const Category label = categorize(normal, kUp);
    const auto count = static_cast<std::size_t>(std::llround(density_ * la * lb));
    std::uniform_real_distribution<double> ua(0.0, la), ub(0.0, lb);
    for (std::size_t i = 0; i < count; ++i) {
      const double a = ua(rng_);
      const double b = ub(rng_);
      scene_.cloud.points.push_back(origin + a * u + b * v);
      scene_.cloud.labels->push_back(label);
      scene_.gt_plane_id.push_back(id);
    }
  }

  /// Axis-aligned face: `fixed_axis` held at `fixed`, the other two axes
  /// sampled over [lo, hi]. Keeps the fixed coordinate exact.
  void add_axis_face(int fixed_axis, double fixed, const Point3& lo, const Point3& hi,
                     const Eigen::Vector3d& normal) {
    const auto id = static_cast<std::int32_t>(scene_.gt_normals.size());
    scene_.gt_normals.push_back(normal);
    scene_.gt_offsets.push_back(normal[fixed_axis] * fixed);
    const Category label = categorize(normal, kUp);
    const int a0 = (fixed_axis + 1) % 3, a1 = (fixed_axis + 2) % 3;
    const double area = (hi[a0] - lo[a0]) * (hi[a1] - lo[a1]);
    const auto count = static_cast<std::size_t>(std::llround(density_ * area));
    std::uniform_real_distribution<double> d0(lo[a0], hi[a0]), d1(lo[a1], hi[a1]);
    for (std::size_t i = 0; i < count; ++i) {
      Point3 p;
      p[fixed_axis] = fixed;
      p[a0] = d0(rng_);
      p[a1] = d1(rng_);
      scene_.cloud.points.push_back(p);
      scene_.cloud.labels->push_back(label);
      scene_.gt_plane_id.push_back(id);
    }
  }

  std::mt19937_64& rng() { return rng_; }
  GroundTruthScene finish(ShapeSpec spec) {
    scene_.spec = spec;
    return std::move(scene_);
  }

 private:
  double density_;
  std::mt19937_64 rng_;
  GroundTruthScene scene_;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(what) + " must be positive");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void check_scene(const GroundTruthScene& s) {
  check_cloud(s.cloud);
  if (s.gt_plane_id.size() != s.cloud.size()) throw Error("gt_plane_id length mismatch");
  if (s.gt_offsets.size() != s.gt_normals.size()) throw Error("gt_offsets length mismatch");
  for (auto id : s.gt_plane_id) {
    if (id < 0 || static_cast<std::size_t>(id) >= s.gt_normals.size()) {
      throw Error("ground-truth plane id " + std::to_string(id) + " out of range");
    }
  }
}

double max_plane_residual(const GroundTruthScene& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.cloud.size(); ++i) {
    const auto k = static_cast<std::size_t>(s.gt_plane_id[i]);
    worst = std::max(worst, std::abs(s.gt_normals[k].dot(s.cloud.points[i]) - s.gt_offsets[k]));
  }
  return worst;
}

GroundTruthScene gen_staircase(const StaircaseSpec& spec, double density, std::uint64_t seed) {
  if (spec.steps < 1) throw Error("staircase needs at least one step");
  require_positive(spec.length, "step length");
  require_positive(spec.width, "step width");
  require_positive(spec.height, "step height");
  SceneBuilder b(density, seed);
  const double L = spec.length, W = spec.width, H = spec.height;
  for (int i = 0; i < spec.steps; ++i) {
    b.add_axis_face(0, i * L, Point3(0.0, 0.0, i * H), Point3(0.0, W, (i + 1) * H),
                    Eigen::Vector3d(-1.0, 0.0, 0.0));
    b.add_axis_face(2, (i + 1) * H, Point3(i * L, 0.0, 0.0), Point3((i + 1) * L, W, 0.0),
                    Eigen::Vector3d(0.0, 0.0, 1.0));
  }
  return b.finish(spec);
}

GroundTruthScene gen_box(const BoxSpec& spec, double density, std::uint64_t seed) {
  require_positive(spec.length, "box length");
  require_positive(spec.width, "box width");
  require_positive(spec.height, "box height");
  SceneBuilder b(density, seed);
  const double l = spec.length, w = spec.width, h = spec.height;
  b.add_axis_face(2, h, Point3(0.0, 0.0, 0.0), Point3(l, w, 0.0), Eigen::Vector3d::UnitZ());
  b.add_axis_face(0, 0.0, Point3(0.0, 0.0, 0.0), Point3(0.0, w, h), -Eigen::Vector3d::UnitX());
  b.add_axis_face(0, l, Point3(0.0, 0.0, 0.0), Point3(0.0, w, h), Eigen::Vector3d::UnitX());
  b.add_axis_face(1, 0.0, Point3(0.0, 0.0, 0.0), Point3(l, 0.0, h), -Eigen::Vector3d::UnitY());
  b.add_axis_face(1, w, Point3(0.0, 0.0, 0.0), Point3(l, 0.0, h), Eigen::Vector3d::UnitY());
  return b.finish(spec);
}

GroundTruthScene gen_plane(const PlaneSpec& spec, double density, std::uint64_t seed) {
  require_positive(spec.length, "plane length");
  require_positive(spec.width, "plane width");
  if (!(std::abs(spec.nz) <= 1.0)) throw Error("nz must lie in [-1, 1]");
  SceneBuilder b(density, seed);
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  const double phi = azimuth(b.rng());
  const double s = std::sqrt(std::max(0.0, 1.0 - spec.nz * spec.nz));
  const Eigen::Vector3d n(s * std::cos(phi), s * std::sin(phi), spec.nz);
  const Eigen::Vector3d helper = std::abs(n.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d u = n.cross(helper).normalized();
  const Eigen::Vector3d v = n.cross(u);
  const Point3 corner = -0.5 * spec.length * u - 0.5 * spec.width * v;
  b.add_face(corner, u, spec.length, v, spec.width, n);
  return b.finish(spec);
}

GroundTruthScene generate(const ShapeSpec& spec, double density, std::uint64_t seed) {
  return std::visit(
      [&](const auto& s) -> GroundTruthScene {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StaircaseSpec>) return gen_staircase(s, density, seed);
        else if constexpr (std::is_same_v<T, BoxSpec>) return gen_box(s, density, seed);
        else return gen_plane(s, density, seed);
      },
      spec);
}

GroundTruthScene add_noise(GroundTruthScene scene, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error("noise sigma must be non-negative");
  if (sigma == 0.0) return scene;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& p : scene.cloud.points) {
    p.x() += noise(rng);
    p.y() += noise(rng);
    p.z() += noise(rng);
  }
  return scene;
}

GroundTruthScene augment(GroundTruthScene scene, const AugmentOps& ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (ops.jitter) {
    const double a = *ops.jitter;
    if (!(a >= 0.0)) throw Error("jitter amplitude must be non-negative");
    std::uniform_real_distribution<double> u(-a, a);
    for (auto& p : scene.cloud.points) {
      p.x() += u(rng);
      p.y() += u(rng);
      p.z() += u(rng);
    }
  }
  if (ops.rotate_z || ops.rotate_angle) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double angle = ops.rotate_angle ? *ops.rotate_angle : u(rng);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    for (auto& p : scene.cloud.points) p = R * p;
    // Offsets are invariant: (R n) . (R x) = n . x.
    for (auto& n : scene.gt_normals) n = R * n;
  }
  if (ops.drop_clusters > 0 && !scene.cloud.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, scene.cloud.size() - 1);
    std::vector<Point3> centers;
    for (std::size_t k = 0; k < ops.drop_clusters; ++k) centers.push_back(scene.cloud.points[pick(rng)]);
    const double r2 = ops.drop_radius * ops.drop_radius;
    std::vector<PointIndex> keep;
    for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
      bool inside = false;
      for (const auto& c : centers) inside = inside || (scene.cloud.points[i] - c).squaredNorm() <= r2;
      if (!inside) keep.push_back(static_cast<PointIndex>(i));
    }
    scene = subsample(scene, keep);
  }
  return scene;
}

std::vector<GroundTruthScene> gen_eval_suite(std::size_t n_scenes, std::uint64_t seed, double density) {
  if (n_scenes == 0) throw Error("suite needs at least one scene");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> steps(2, 6);
  std::uniform_real_distribution<double> length(0.2, 0.4), width(0.3, 1.5), height(0.1, 0.3);
  std::vector<GroundTruthScene> suite;
  suite.reserve(n_scenes);
  for (std::size_t i = 0; i < n_scenes; ++i) {
    StaircaseSpec s;
    s.steps = steps(rng);
    s.length = length(rng);
    s.width = width(rng);
    s.height = height(rng);
    suite.push_back(gen_staircase(s, density, mix_seed(seed, i)));
  }
  return suite;
}

GroundTruthScene subsample(const GroundTruthScene& scene, const std::vector<PointIndex>& indices) {
  GroundTruthScene out;
  out.gt_normals = scene.gt_normals;
  out.gt_offsets = scene.gt_offsets;
  out.spec = scene.spec;
  out.cloud.points.reserve(indices.size());
  out.gt_plane_id.reserve(indices.size());
  if (scene.cloud.has_labels()) out.cloud.labels.emplace().reserve(indices.size());
  for (PointIndex i : indices) {
    out.cloud.points.push_back(scene.cloud.points.at(i));
    out.gt_plane_id.push_back(scene.gt_plane_id.at(i));
    if (scene.cloud.has_labels()) out.cloud.labels->push_back((*scene.cloud.labels)[i]);
  }
  return out;
}

void write_ground_truth(std::ostream& out, const GroundTruthScene& scene) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::setprecision(17);
  ss << "planeseg-ground-truth 1\n" << "planes " << scene.plane_count() << '\n';
  for (std::size_t k = 0; k < scene.plane_count(); ++k) {
    const auto& n = scene.gt_normals[k];
    ss << n.x() << ' ' << n.y() << ' ' << n.z() << ' ' << scene.gt_offsets[k] << '\n';
  }
  ss << "points " << scene.gt_plane_id.size() << '\n';
  for (auto id : scene.gt_plane_id) ss << id << '\n';
  out << ss.str();
}

void write_ground_truth(const std::string& path, const GroundTruthScene& scene) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_ground_truth(out, scene);
  if (!out) throw Error("write failed: " + path);
}

GroundTruthScene read_ground_truth(std::istream& in) {
  GroundTruthScene scene;
  std::string magic, word;
  int version = 0;
  in >> magic >> version;
  if (magic != "planeseg-ground-truth" || version != 1) throw Error("not a ground-truth file");
  std::size_t planes = 0, points = 0;
  in >> word >> planes;
  if (word != "planes" || !in) throw Error("ground truth: expected 'planes <count>'");
  for (std::size_t k = 0; k < planes; ++k) {
    Eigen::Vector3d n;
    double d = 0.0;
    in >> n.x() >> n.y() >> n.z() >> d;
    if (!in) throw Error("ground truth: malformed plane line " + std::to_string(k));
    scene.gt_normals.push_back(n);
    scene.gt_offsets.push_back(d);
  }
  in >> word >> points;
  if (word != "points" || !in) throw Error("ground truth: expected 'points <count>'");
  scene.gt_plane_id.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    in >> scene.gt_plane_id[i];
    if (!in) throw Error("ground truth: malformed id at point " + std::to_string(i));
    if (scene.gt_plane_id[i] < 0 || static_cast<std::size_t>(scene.gt_plane_id[i]) >= planes) {
      throw Error("ground truth: plane id out of range at point " + std::to_string(i));
    }
  }
  return scene;
}

GroundTruthScene read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_ground_truth(in);
}

}  // namespace planeseg
