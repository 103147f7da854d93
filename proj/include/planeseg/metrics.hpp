#pragma once

#include "planeseg/synth.hpp"
#include "planeseg/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace planeseg {

/**
 * @brief Maps each segmented plane to the ground-truth plane owning the
 * plurality of its members (ties -> lower gt id).
 *
 * Planes with no members are unmatched (nullopt).
 */
std::vector<std::optional<std::int32_t>> match_planes(const SegmentationResult& result,
                                                      const GroundTruthScene& gt);

/// Mean angle in degrees between matched normals, arccos(|n_hat . n|).
/// Throws Error when nothing is matched.
double directional_error(const SegmentationResult& result, const GroundTruthScene& gt);

/// 100 * segmented plane count / ground-truth plane count.
double plane_count_ratio(const SegmentationResult& result, const GroundTruthScene& gt);

/// 100 * points assigned to no plane / total points.
double missing_ratio(const SegmentationResult& result, const GroundTruthScene& gt);

struct SceneEval {
  std::string scene_id;
  double alpha_deg = 0.0;
  double r_p_percent = 0.0;
  double r_m_percent = 0.0;
  std::size_t planes = 0;
  std::size_t gt_planes = 0;
  std::size_t matched = 0;
};

SceneEval evaluate_scene(const SegmentationResult& result, const GroundTruthScene& gt,
                         std::string scene_id = {});

/// Suite-level metrics: per-scene values averaged over scenes.
struct EvalReport {
  double alpha_deg = 0.0;
  double r_p_percent = 0.0;
  double r_m_percent = 0.0;
  std::vector<SceneEval> per_scene;
  StageTimings timings_ms;  ///< mean per-stage durations
  double fps = 0.0;
};

/// Averages scene metrics; scenes with no matched plane are excluded from
/// alpha only. timings are averaged when given (one per scene).
EvalReport aggregate(std::vector<SceneEval> scenes, const std::vector<StageTimings>& timings = {});

/// Rebuilds planes from a per-point assignment by PCA over members;
/// ids must be dense from 0. Planes with < 3 members keep the default
/// normal and are still counted.
SegmentationResult result_from_assignment(const LabeledCloud& cloud,
                                          const std::vector<std::int32_t>& assignment,
                                          const Eigen::Vector3d& gravity = kUp);

/// Text table with rows alpha / r_p / r_m and one column per report.
void print_metric_table(std::ostream& out, const std::vector<std::string>& columns,
                        const std::vector<EvalReport>& reports);

/// CSV: column,alpha_deg,r_p_percent,r_m_percent,fps.
void write_metric_csv(std::ostream& out, const std::vector<std::string>& columns,
                      const std::vector<EvalReport>& reports);

}  // namespace planeseg
