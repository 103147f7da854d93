#pragma once

#include "planeseg/metrics.hpp"
#include "planeseg/ransac.hpp"
#include "planeseg/synth.hpp"
#include "planeseg/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace planeseg {

enum class Method { Ours, Ransac };

/// Where point categories come from before segmentation.
enum class LabelMode {
  Geometric,  ///< classify_cloud()
  Provided,   ///< keep the cloud's own labels
  Uniform,    ///< every point H: the purity criterion never fires
};

enum class Sampler { Fps, Voxel };

struct PipelineOptions {
  SegmenterConfig cfg;
  Method method = Method::Ours;
  LabelMode labels = LabelMode::Geometric;
  RansacConfig ransac;
};

/// Labels (timed as t_c) and segments (t_b, t_s) an already sampled cloud.
SegmentationResult run_pipeline(const LabeledCloud& cloud, const PipelineOptions& options);

struct SamplingOptions {
  Sampler sampler = Sampler::Fps;
  std::size_t points = 8192;  ///< FPS target; ignored by the voxel sampler
  double noise_sigma = 0.0;   ///< m, added after sampling
  std::uint64_t seed = 0;
};

/// Downsampled (and optionally noised) scene with the time spent sampling.
struct PreparedScene {
  GroundTruthScene scene;
  std::size_t raw_count = 0;
  double downsample_ms = 0.0;
};

/**
 * @brief Downsamples a dense scene and keeps its ground truth.
 *
 * FPS keeps min(points, size) points. The voxel sampler uses
 * cfg.voxel_size; each voxel inherits the plurality ground-truth id of its
 * members. Noise is added to the sampled points.
 */
PreparedScene prepare_scene(const GroundTruthScene& dense, const SamplingOptions& sampling,
                            double voxel_size);

/// Runs the pipeline on every prepared scene (in parallel) and evaluates.
EvalReport evaluate_suite(const std::vector<GroundTruthScene>& scenes, const PipelineOptions& options);

/// One row of the timing table, milliseconds.
struct BenchRecord {
  std::string scene_id;
  std::size_t n_raw = 0;   ///< N_m
  std::size_t n_down = 0;  ///< N_d
  StageTimings t;

  double fps() const noexcept {
    const double total = t.total_ms();
    return total > 0.0 ? 1000.0 / total : 0.0;
  }
};

/// Stage timings of the run with the median total among `runs` runs,
/// after `warmup` untimed runs. Runs sequentially.
StageTimings time_pipeline(const LabeledCloud& cloud, const PipelineOptions& options, int runs,
                           int warmup);

struct BenchOptions {
  PipelineOptions pipeline;
  SamplingOptions sampling;
  int runs = 5;
  int warmup = 1;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  EvalReport report;
};

/**
 * @brief Times and evaluates the method on a suite of dense scenes.
 *
 * Per scene: downsampling is timed once, the labelling and segmentation
 * stages via time_pipeline(). Throws Error for an empty suite.
 */
BenchResult run_bench(const std::vector<GroundTruthScene>& dense_suite, const BenchOptions& options);

/// Timing table: ID, N_m, N_d, t_d, t_c, t_b, t_s, Speed (FPS).
void print_bench_table(std::ostream& out, const std::vector<BenchRecord>& records);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

std::string scene_name(std::size_t index);

}  // namespace planeseg
