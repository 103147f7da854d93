// planeseg command line: classify, segment, synth, eval, bench.

#include "planeseg/bench.hpp"
#include "planeseg/classify.hpp"
#include "planeseg/cloud_io.hpp"
#include "planeseg/config_io.hpp"
#include "planeseg/depth.hpp"
#include "planeseg/metrics.hpp"
#include "planeseg/octree.hpp"
#include "planeseg/ransac.hpp"
#include "planeseg/sampling.hpp"
#include "planeseg/segmenter.hpp"
#include "planeseg/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace planeseg;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string gt_path_for(const std::string& cloud_path) {
  return fs::path(cloud_path).replace_extension(".gt").string();
}

SegmenterConfig load_config(const std::string& path) {
  return path.empty() ? default_config() : read_config(path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

/// Labels from a PLY `category` property or a text file of 0/1/h/v tokens.
std::vector<Category> read_label_file(const std::string& path) {
  if (ends_with(path, ".ply")) {
    LabeledCloud c = read_cloud(path);
    if (!c.has_labels()) throw Error(path + " has no category property");
    return *c.labels;
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file " + path);
  std::vector<Category> labels;
  std::string tok;
  while (in >> tok) {
    if (tok == "0" || tok == "h" || tok == "H") labels.push_back(Category::H);
    else if (tok == "1" || tok == "v" || tok == "V") labels.push_back(Category::V);
    else throw Error(path + ": bad label token '" + tok + "' at entry " + std::to_string(labels.size()));
  }
  return labels;
}

void print_timings(const StageTimings& t) {
  std::printf("t_d %.2f ms  t_c %.2f ms  t_b %.2f ms  t_s %.2f ms  total %.2f ms  (%.1f FPS)\n",
              t.downsample_ms, t.classify_ms, t.build_ms, t.segment_ms, t.total_ms(),
              t.total_ms() > 0.0 ? 1000.0 / t.total_ms() : 0.0);
}

void write_planes(const std::string& path, const SegmentationResult& r) {
  auto out = open_output(path);
  out << std::setprecision(9) << "# id count nx ny nz cx cy cz mse_normal\n";
  for (std::size_t k = 0; k < r.planes.size(); ++k) {
    const Plane& p = r.planes[k];
    out << k << ' ' << p.count << ' ' << p.normal.x() << ' ' << p.normal.y() << ' ' << p.normal.z()
        << ' ' << p.centroid.x() << ' ' << p.centroid.y() << ' ' << p.centroid.z() << ' '
        << p.mse_normal << '\n';
  }
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string input, output, config, gravity;
  std::size_t k = 0;
  bool plain = false;
};

int run_classify(const ClassifyArgs& a) {
  SegmenterConfig cfg = load_config(a.config);
  if (a.k > 0) cfg.classify_k = a.k;
  if (!a.gravity.empty()) cfg.gravity = parse_vector3(a.gravity).normalized();
  if (a.plain) cfg.classify_edge_aware = false;
  validate_config(cfg);

  const LabeledCloud cloud = read_cloud(a.input);
  const auto t0 = Clock::now();
  const LabeledCloud labeled = classify_cloud(cloud, cfg);
  const double ms = ms_since(t0);
  std::size_t n_h = 0;
  for (Category c : *labeled.labels) n_h += c == Category::H;
  write_cloud(labeled, nullptr, a.output, format_from_path(a.output));
  std::printf("%zu points: %zu h, %zu v (%.2f ms)\n", labeled.size(), n_h, labeled.size() - n_h, ms);
  return 0;
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string input, output, config, labels = "geometric", method = "ours", dump_octree, origin;
  std::string planes, intrinsics;
  double theta_pf = 0.01;
  std::uint64_t seed = 0;
  bool timings = false;
  bool voxel = false;
};

int run_segment(const SegmentArgs& a) {
  SegmenterConfig cfg = load_config(a.config);
  validate_config(cfg);

  StageTimings t;
  LabeledCloud cloud;
  const bool depth_input = ends_with(a.input, ".png");
  if (depth_input) {
    if (a.intrinsics.empty()) throw Error("depth input needs --intrinsics");
    cloud = backproject(load_depth_png(a.input, read_intrinsics(a.intrinsics)));
  } else {
    cloud = read_cloud(a.input);
  }
  if (depth_input || a.voxel) {
    const auto t0 = Clock::now();
    cloud = voxel_downsample(cloud, cfg.voxel_size);
    t.downsample_ms = ms_since(t0);
  }

  SegmentationResult result;
  if (a.method == "ransac") {
    RansacConfig rc;
    rc.theta_pf = a.theta_pf;
    rc.seed = a.seed;
    rc.gravity = cfg.gravity;
    result = ransac_segment(cloud, rc);
  } else {
    const auto t0 = Clock::now();
    if (a.labels == "geometric") {
      cloud = classify_cloud(cloud, cfg);
    } else if (a.labels == "input") {
      if (!cloud.has_labels()) throw Error(a.input + " carries no category labels");
    } else if (a.labels == "none") {
      cloud = uniform_labels(std::move(cloud));
    } else if (a.labels.rfind("file:", 0) == 0) {
      cloud = inject_labels(std::move(cloud), read_label_file(a.labels.substr(5)));
    } else {
      throw Error("unknown --labels value '" + a.labels + "'");
    }
    const double classify_ms = ms_since(t0);
    SegmentOptions opts;
    if (!a.origin.empty()) opts.origin = parse_vector3(a.origin);
    result = segment(cloud, cfg, opts);
    result.timings.classify_ms = classify_ms;
    if (!a.dump_octree.empty()) {
      auto out = open_output(a.dump_octree);
      Octree::build(cloud, cfg, opts.origin).dump(out);
    }
  }
  result.timings.downsample_ms = t.downsample_ms;
  check_result(result, cloud.size());

  if (!a.output.empty()) write_cloud(cloud, &result.assignment, a.output, format_from_path(a.output));
  if (!a.planes.empty()) write_planes(a.planes, result);
  std::printf("%zu points, %zu planes, %zu unassigned\n", cloud.size(), result.planes.size(),
              result.residual_indices.size());
  if (a.timings) print_timings(result.timings);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string shape = "staircase", output, output_dir, sampler = "fps";
  int steps = 3;
  double length = 0.3, width = 1.0, height = 0.2, nz = 1.0;
  double density = kDefaultDensity, noise_cm = 0.0;
  std::size_t points = 0, count = 100;
  std::uint64_t seed = 0;
};

GroundTruthScene prepare(const GroundTruthScene& dense, const SynthArgs& a, std::uint64_t seed,
                         double voxel) {
  if (a.points == 0 && a.sampler == "fps") {
    return a.noise_cm > 0.0 ? add_noise(dense, a.noise_cm / 100.0, seed ^ 0x5eedULL) : dense;
  }
  SamplingOptions s;
  s.sampler = a.sampler == "voxel" ? Sampler::Voxel : Sampler::Fps;
  s.points = a.points;
  s.noise_sigma = a.noise_cm / 100.0;
  s.seed = seed;
  return prepare_scene(dense, s, voxel).scene;
}

void save_scene(const GroundTruthScene& scene, const std::string& path) {
  write_cloud(scene.cloud, nullptr, path, format_from_path(path));
  write_ground_truth(gt_path_for(path), scene);
}

int run_synth(const SynthArgs& a) {
  const double voxel = default_config().voxel_size;
  if (a.shape == "suite") {
    if (a.output_dir.empty()) throw Error("--shape suite needs --output-dir");
    fs::create_directories(a.output_dir);
    const auto suite = gen_eval_suite(a.count, a.seed, a.density);
    for (std::size_t i = 0; i < suite.size(); ++i) {
      save_scene(prepare(suite[i], a, a.seed + i, voxel),
                 (fs::path(a.output_dir) / (scene_name(i) + ".ply")).string());
    }
    std::printf("wrote %zu scenes to %s\n", suite.size(), a.output_dir.c_str());
    return 0;
  }
  if (a.output.empty()) throw Error("synth needs --output");
  ShapeSpec spec;
  if (a.shape == "staircase") spec = StaircaseSpec{a.steps, a.length, a.width, a.height};
  else if (a.shape == "box") spec = BoxSpec{a.length, a.width, a.height};
  else if (a.shape == "plane") spec = PlaneSpec{a.length, a.width, a.nz};
  else throw Error("unknown --shape '" + a.shape + "'");
  const GroundTruthScene scene = prepare(generate(spec, a.density, a.seed), a, a.seed, voxel);
  save_scene(scene, a.output);
  std::printf("%zu points, %zu planes -> %s (+ %s)\n", scene.cloud.size(), scene.plane_count(),
              a.output.c_str(), gt_path_for(a.output).c_str());
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<std::string> inputs, gts;
  std::string csv, column = "result";
  bool per_scene = false;
};

int run_eval(const EvalArgs& a) {
  if (a.inputs.empty()) throw Error("eval needs at least one --input");
  if (!a.gts.empty() && a.gts.size() != a.inputs.size()) {
    throw Error("--gt must be given once per --input");
  }
  std::vector<SceneEval> evals;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    const std::string& in = a.inputs[i];
    try {
      PlyContents ply = read_ply(in);
      if (!ply.plane_id) throw Error("no plane_id property");
      GroundTruthScene gt = read_ground_truth(a.gts.empty() ? gt_path_for(in) : a.gts[i]);
      if (gt.gt_plane_id.size() != ply.cloud.size()) {
        throw Error("ground truth has " + std::to_string(gt.gt_plane_id.size()) + " points, cloud has " +
                    std::to_string(ply.cloud.size()));
      }
      gt.cloud = ply.cloud;
      const auto result = result_from_assignment(ply.cloud, *ply.plane_id);
      evals.push_back(evaluate_scene(result, gt, fs::path(in).stem().string()));
    } catch (const std::exception& e) {
      failures.push_back(in + ": " + e.what());
    }
  }
  if (!evals.empty()) {
    const EvalReport report = aggregate(evals);
    print_metric_table(std::cout, {a.column}, {report});
    if (a.per_scene) {
      for (const auto& s : report.per_scene) {
        std::printf("%-24s alpha %7.3f  r_p %7.2f  r_m %6.2f  planes %zu/%zu\n", s.scene_id.c_str(),
                    s.alpha_deg, s.r_p_percent, s.r_m_percent, s.planes, s.gt_planes);
      }
    }
    if (!a.csv.empty()) {
      auto out = open_output(a.csv);
      write_metric_csv(out, {a.column}, {report});
    }
  }
  for (const auto& f : failures) std::fprintf(stderr, "error: %s\n", f.c_str());
  return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::size_t suite_size = 100;
  std::uint64_t seed = 0;
  std::string method = "ours", sampler = "fps", labels = "geometric", csv, table_csv, input_dir, config;
  std::vector<std::size_t> points{8192};
  std::vector<double> noise_cm{0.0};
  double theta_pf = 0.01;
  int runs = 5, warmup = 1;
  bool per_scene = false;
};

std::vector<GroundTruthScene> load_suite_dir(const std::string& dir, std::vector<std::string>& failures) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension().string();
    if (ext == ".ply" || ext == ".xyz") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GroundTruthScene> suite;
  for (const auto& f : files) {
    try {
      GroundTruthScene s = read_ground_truth(gt_path_for(f.string()));
      s.cloud = read_cloud(f.string());
      check_scene(s);
      suite.push_back(std::move(s));
    } catch (const std::exception& e) {
      failures.push_back(f.string() + ": " + e.what());
    }
  }
  return suite;
}

int run_bench_cmd(const BenchArgs& a) {
  std::vector<std::string> failures;
  const std::vector<GroundTruthScene> suite =
      a.input_dir.empty() ? gen_eval_suite(a.suite_size, a.seed) : load_suite_dir(a.input_dir, failures);
  if (suite.empty()) {
    for (const auto& f : failures) std::fprintf(stderr, "error: %s\n", f.c_str());
    throw Error("no scenes to benchmark");
  }

  std::vector<Method> methods;
  if (a.method == "ours" || a.method == "both") methods.push_back(Method::Ours);
  if (a.method == "ransac" || a.method == "both") methods.push_back(Method::Ransac);
  if (methods.empty()) throw Error("unknown --method '" + a.method + "'");

  BenchOptions base;
  base.pipeline.cfg = load_config(a.config);
  validate_config(base.pipeline.cfg);
  if (a.labels == "geometric") base.pipeline.labels = LabelMode::Geometric;
  else if (a.labels == "gt") base.pipeline.labels = LabelMode::Provided;
  else if (a.labels == "none") base.pipeline.labels = LabelMode::Uniform;
  else throw Error("unknown --labels value '" + a.labels + "'");
  base.pipeline.ransac.theta_pf = a.theta_pf;
  base.pipeline.ransac.seed = a.seed;
  base.pipeline.ransac.gravity = base.pipeline.cfg.gravity;
  base.sampling.sampler = a.sampler == "voxel" ? Sampler::Voxel : Sampler::Fps;
  base.sampling.seed = a.seed;
  base.runs = a.runs;
  base.warmup = a.warmup;

  std::vector<std::string> columns;
  std::vector<EvalReport> reports;
  std::vector<BenchRecord> all_records;
  for (Method m : methods) {
    for (std::size_t pts : a.points) {
      for (double cm : a.noise_cm) {
        BenchOptions o = base;
        o.pipeline.method = m;
        o.sampling.points = pts;
        o.sampling.noise_sigma = cm / 100.0;
        std::ostringstream name;
        name << (m == Method::Ours ? "ours" : "ransac");
        if (a.points.size() > 1 || o.sampling.sampler == Sampler::Fps) name << '/' << pts;
        name << '/' << cm << "cm";
        BenchResult r = run_bench(suite, o);
        columns.push_back(name.str());
        reports.push_back(r.report);
        if (a.per_scene) {
          std::cout << "\n" << columns.back() << '\n';
          print_bench_table(std::cout, r.records);
        }
        for (auto& rec : r.records) {
          rec.scene_id = columns.back() + "/" + rec.scene_id;
          all_records.push_back(std::move(rec));
        }
      }
    }
  }
  std::cout << '\n';
  print_metric_table(std::cout, columns, reports);
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    write_metric_csv(out, columns, reports);
  }
  if (!a.table_csv.empty()) {
    auto out = open_output(a.table_csv);
    write_bench_csv(out, all_records);
  }
  for (const auto& f : failures) std::fprintf(stderr, "error: %s\n", f.c_str());
  return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-resolution planar region extraction from point clouds"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Label points h/v from their local normals");
  classify->add_option("--input", ca.input, "Input cloud (.ply, .xyz)")->required();
  classify->add_option("--output", ca.output, "Output cloud with category property")->required();
  classify->add_option("--config", ca.config, "Segmenter config file");
  classify->add_option("--k", ca.k, "Neighbours for normal estimation");
  classify->add_option("--gravity", ca.gravity, "Gravity baseline gx,gy,gz");
  classify->add_flag("--plain", ca.plain, "Plain k-NN PCA normals (no edge-aware pass)");

  SegmentArgs sa;
  auto* seg = app.add_subcommand("segment", "Extract planes");
  seg->add_option("--input", sa.input, "Input cloud (.ply, .xyz) or 16-bit depth .png")->required();
  seg->add_option("--output", sa.output, "Colored PLY with plane_id");
  seg->add_option("--planes", sa.planes, "Text file with one line per plane");
  seg->add_option("--config", sa.config, "Segmenter config file");
  seg->add_option("--labels", sa.labels, "geometric | input | none | file:<path>");
  seg->add_option("--method", sa.method, "ours | ransac")->check(CLI::IsMember({"ours", "ransac"}));
  seg->add_option("--theta-pf", sa.theta_pf, "RANSAC inlier distance, m");
  seg->add_option("--seed", sa.seed, "RANSAC seed");
  seg->add_option("--origin", sa.origin, "Octree min corner x,y,z");
  seg->add_option("--dump-octree", sa.dump_octree, "Write one line per occupied octree node");
  seg->add_option("--intrinsics", sa.intrinsics, "Camera intrinsics for depth input");
  seg->add_flag("--voxel", sa.voxel, "Voxel-downsample the input first");
  seg->add_flag("--timings", sa.timings, "Print t_d, t_c, t_b, t_s");

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "Generate synthetic scenes with ground truth");
  synth->add_option("--shape", ya.shape, "staircase | box | plane | suite")
      ->check(CLI::IsMember({"staircase", "box", "plane", "suite"}));
  synth->add_option("--output", ya.output, "Scene cloud; ground truth goes to <stem>.gt");
  synth->add_option("--output-dir", ya.output_dir, "Directory for --shape suite");
  synth->add_option("--count", ya.count, "Scenes in the suite");
  synth->add_option("--steps", ya.steps, "Staircase steps");
  synth->add_option("--length", ya.length, "Length, m");
  synth->add_option("--width", ya.width, "Width, m");
  synth->add_option("--height", ya.height, "Height, m");
  synth->add_option("--nz", ya.nz, "Plane normal z-component");
  synth->add_option("--density", ya.density, "Points per m^2");
  synth->add_option("--seed", ya.seed, "Random seed");
  synth->add_option("--noise-cm", ya.noise_cm, "Gaussian noise sigma, cm");
  synth->add_option("--points", ya.points, "FPS target count (0 keeps all)");
  synth->add_option("--sampler", ya.sampler, "fps | voxel")->check(CLI::IsMember({"fps", "voxel"}));

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score segmented clouds against ground truth");
  eval->add_option("--input", ea.inputs, "Segmented PLY with plane_id (repeatable)")->required();
  eval->add_option("--gt", ea.gts, "Ground-truth sidecar per input (default <stem>.gt)");
  eval->add_option("--csv", ea.csv, "Write metrics CSV");
  eval->add_option("--column", ea.column, "Column title");
  eval->add_flag("--per-scene", ea.per_scene, "Print per-scene metrics");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Accuracy and timing over a staircase suite");
  bench->add_option("--suite-size", ba.suite_size, "Generated scenes");
  bench->add_option("--input-dir", ba.input_dir, "Dense scenes (cloud + .gt) instead of generating");
  bench->add_option("--seed", ba.seed, "Suite and sampling seed");
  bench->add_option("--method", ba.method, "ours | ransac | both")
      ->check(CLI::IsMember({"ours", "ransac", "both"}));
  bench->add_option("--labels", ba.labels, "geometric | gt | none")
      ->check(CLI::IsMember({"geometric", "gt", "none"}));
  bench->add_option("--config", ba.config, "Segmenter config file");
  bench->add_option("--points", ba.points, "FPS point counts");
  bench->add_option("--noise-cm", ba.noise_cm, "Noise levels, cm");
  bench->add_option("--sampler", ba.sampler, "fps | voxel")->check(CLI::IsMember({"fps", "voxel"}));
  bench->add_option("--theta-pf", ba.theta_pf, "RANSAC inlier distance, m");
  bench->add_option("--runs", ba.runs, "Timed runs per scene (median reported)");
  bench->add_option("--warmup", ba.warmup, "Untimed runs per scene");
  bench->add_option("--csv", ba.csv, "Write metrics CSV");
  bench->add_option("--timings-csv", ba.table_csv, "Write per-scene timing CSV");
  bench->add_flag("--per-scene", ba.per_scene, "Print the per-scene timing table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify) return run_classify(ca);
    if (*seg) return run_segment(sa);
    if (*synth) return run_synth(ya);
    if (*eval) return run_eval(ea);
    if (*bench) return run_bench_cmd(ba);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
