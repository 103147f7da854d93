#include "planeseg/bench.hpp"

#include "planeseg/classify.hpp"
#include "planeseg/parallel.hpp"
#include "planeseg/sampling.hpp"
#include "planeseg/segmenter.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace planeseg {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

SegmentationResult run_pipeline(const LabeledCloud& cloud, const PipelineOptions& options) {
  if (options.method == Method::Ransac) return ransac_segment(cloud, options.ransac);

  const auto t0 = Clock::now();
  LabeledCloud labeled;
  switch (options.labels) {
    case LabelMode::Geometric: labeled = classify_cloud(cloud, options.cfg); break;
    case LabelMode::Provided:
      if (!cloud.has_labels()) throw Error("pipeline: cloud carries no labels");
      labeled = cloud;
      break;
    case LabelMode::Uniform: labeled = uniform_labels(cloud); break;
  }
  const double classify_ms = ms_since(t0);
  SegmentationResult result = segment(labeled, options.cfg);
  result.timings.classify_ms = classify_ms;
  return result;
}

PreparedScene prepare_scene(const GroundTruthScene& dense, const SamplingOptions& sampling,
                            double voxel_size) {
  PreparedScene out;
  out.raw_count = dense.cloud.size();
  const auto t0 = Clock::now();
  if (sampling.sampler == Sampler::Fps) {
    const std::size_t n = std::min(sampling.points, dense.cloud.size());
    const auto idx = furthest_point_sample_indices(dense.cloud, n, sampling.seed);
    out.downsample_ms = ms_since(t0);
    out.scene = subsample(dense, idx);
  } else {
    const auto groups = voxel_groups(dense.cloud, voxel_size);
    const LabeledCloud down = voxel_downsample(dense.cloud, voxel_size);
    out.downsample_ms = ms_since(t0);
    out.scene.gt_normals = dense.gt_normals;
    out.scene.gt_offsets = dense.gt_offsets;
    out.scene.spec = dense.spec;
    out.scene.cloud = down;
    std::vector<std::size_t> votes(dense.plane_count());
    for (const auto& g : groups) {
      std::fill(votes.begin(), votes.end(), 0);
      for (PointIndex i : g) ++votes[static_cast<std::size_t>(dense.gt_plane_id[i])];
      const auto best = std::max_element(votes.begin(), votes.end()) - votes.begin();
      out.scene.gt_plane_id.push_back(static_cast<std::int32_t>(best));
    }
  }
  if (sampling.noise_sigma > 0.0) {
    out.scene = add_noise(std::move(out.scene), sampling.noise_sigma, sampling.seed ^ 0x5eedULL);
  }
  return out;
}

EvalReport evaluate_suite(const std::vector<GroundTruthScene>& scenes, const PipelineOptions& options) {
  std::vector<SceneEval> evals(scenes.size());
  std::vector<StageTimings> timings(scenes.size());
  parallel_for(scenes.size(), [&](std::size_t i) {
    const SegmentationResult r = run_pipeline(scenes[i].cloud, options);
    evals[i] = evaluate_scene(r, scenes[i], scene_name(i));
    timings[i] = r.timings;
  });
  return aggregate(std::move(evals), timings);
}

StageTimings time_pipeline(const LabeledCloud& cloud, const PipelineOptions& options, int runs,
                           int warmup) {
  if (runs < 1) throw Error("timing needs at least one run");
  for (int w = 0; w < warmup; ++w) run_pipeline(cloud, options);
  std::vector<StageTimings> samples;
  samples.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) samples.push_back(run_pipeline(cloud, options).timings);
  std::sort(samples.begin(), samples.end(),
            [](const StageTimings& a, const StageTimings& b) { return a.total_ms() < b.total_ms(); });
  return samples[samples.size() / 2];
}

BenchResult run_bench(const std::vector<GroundTruthScene>& dense_suite, const BenchOptions& options) {
  if (dense_suite.empty()) throw Error("bench: empty suite");
  BenchResult out;
  std::vector<SceneEval> evals;
  std::vector<StageTimings> timings;
  for (std::size_t i = 0; i < dense_suite.size(); ++i) {
    SamplingOptions sampling = options.sampling;
    sampling.seed = options.sampling.seed + i;
    const PreparedScene prepared = prepare_scene(dense_suite[i], sampling, options.pipeline.cfg.voxel_size);
    BenchRecord rec;
    rec.scene_id = scene_name(i);
    rec.n_raw = prepared.raw_count;
    rec.n_down = prepared.scene.cloud.size();
    rec.t = time_pipeline(prepared.scene.cloud, options.pipeline, options.runs, options.warmup);
    rec.t.downsample_ms = prepared.downsample_ms;
    const SegmentationResult r = run_pipeline(prepared.scene.cloud, options.pipeline);
    evals.push_back(evaluate_scene(r, prepared.scene, rec.scene_id));
    timings.push_back(rec.t);
    out.records.push_back(std::move(rec));
  }
  out.report = aggregate(std::move(evals), timings);
  return out;
}

void print_bench_table(std::ostream& out, const std::vector<BenchRecord>& records) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %9s %7s %8s %8s %8s %8s %12s\n", "ID", "N_m", "N_d", "t_d",
                "t_c", "t_b", "t_s", "Speed (FPS)");
  out << line << std::string(77, '-') << '\n';
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%-10s %9zu %7zu %8.1f %8.1f %8.1f %8.1f %12.1f\n",
                  r.scene_id.c_str(), r.n_raw, r.n_down, r.t.downsample_ms, r.t.classify_ms,
                  r.t.build_ms, r.t.segment_ms, r.fps());
    out << line;
  }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "scene,n_m,n_d,t_d_ms,t_c_ms,t_b_ms,t_s_ms,fps\n";
  out << std::setprecision(6);
  for (const auto& r : records) {
    out << r.scene_id << ',' << r.n_raw << ',' << r.n_down << ',' << r.t.downsample_ms << ','
        << r.t.classify_ms << ',' << r.t.build_ms << ',' << r.t.segment_ms << ',' << r.fps() << '\n';
  }
}

std::string scene_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%03zu", index);
  return buf;
}

}  // namespace planeseg
