#include "planeseg/metrics.hpp"

#include "planeseg/plane_fit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace planeseg {

std::vector<std::optional<std::int32_t>> match_planes(const SegmentationResult& result,
                                                      const GroundTruthScene& gt) {
  std::vector<std::optional<std::int32_t>> out(result.planes.size());
  std::vector<std::size_t> votes(gt.plane_count());
  for (std::size_t k = 0; k < result.planes.size(); ++k) {
    std::fill(votes.begin(), votes.end(), 0);
    for (PointIndex i : result.planes[k].point_indices) ++votes.at(static_cast<std::size_t>(gt.gt_plane_id.at(i)));
    std::size_t best = 0;
    for (std::size_t g = 0; g < votes.size(); ++g) {
      if (votes[g] > best) {
        best = votes[g];
        out[k] = static_cast<std::int32_t>(g);
      }
    }
  }
  return out;
}

double directional_error(const SegmentationResult& result, const GroundTruthScene& gt) {
  const auto match = match_planes(result, gt);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < match.size(); ++k) {
    if (!match[k]) continue;
    const auto& truth = gt.gt_normals[static_cast<std::size_t>(*match[k])];
    const double c = std::abs(result.planes[k].normal.normalized().dot(truth.normalized()));
    sum += std::acos(std::clamp(c, 0.0, 1.0)) * 180.0 / std::numbers::pi;
    ++n;
  }
  if (n == 0) throw Error("directional_error: no segmented plane matches the ground truth");
  return sum / static_cast<double>(n);
}

double plane_count_ratio(const SegmentationResult& result, const GroundTruthScene& gt) {
  if (gt.plane_count() == 0) throw Error("ground truth has no planes");
  return 100.0 * static_cast<double>(result.planes.size()) / static_cast<double>(gt.plane_count());
}

double missing_ratio(const SegmentationResult& result, const GroundTruthScene& gt) {
  const std::size_t n = gt.gt_plane_id.size();
  if (n == 0) throw Error("missing_ratio: empty cloud");
  std::size_t assigned = 0;
  for (const auto& p : result.planes) assigned += p.point_indices.size();
  return 100.0 * static_cast<double>(n - assigned) / static_cast<double>(n);
}

SceneEval evaluate_scene(const SegmentationResult& result, const GroundTruthScene& gt,
                         std::string scene_id) {
  SceneEval e;
  e.scene_id = std::move(scene_id);
  e.planes = result.planes.size();
  e.gt_planes = gt.plane_count();
  const auto match = match_planes(result, gt);
  e.matched = static_cast<std::size_t>(std::count_if(match.begin(), match.end(),
                                                     [](const auto& m) { return m.has_value(); }));
  e.alpha_deg = e.matched > 0 ? directional_error(result, gt) : std::nan("");
  e.r_p_percent = plane_count_ratio(result, gt);
  e.r_m_percent = missing_ratio(result, gt);
  return e;
}

EvalReport aggregate(std::vector<SceneEval> scenes, const std::vector<StageTimings>& timings) {
  EvalReport r;
  std::size_t with_alpha = 0;
  for (const auto& s : scenes) {
    if (!std::isnan(s.alpha_deg)) {
      r.alpha_deg += s.alpha_deg;
      ++with_alpha;
    }
    r.r_p_percent += s.r_p_percent;
    r.r_m_percent += s.r_m_percent;
  }
  if (!scenes.empty()) {
    r.r_p_percent /= static_cast<double>(scenes.size());
    r.r_m_percent /= static_cast<double>(scenes.size());
  }
  r.alpha_deg = with_alpha > 0 ? r.alpha_deg / static_cast<double>(with_alpha) : std::nan("");
  if (!timings.empty()) {
    for (const auto& t : timings) {
      r.timings_ms.downsample_ms += t.downsample_ms;
      r.timings_ms.classify_ms += t.classify_ms;
      r.timings_ms.build_ms += t.build_ms;
      r.timings_ms.segment_ms += t.segment_ms;
    }
    const double n = static_cast<double>(timings.size());
    r.timings_ms.downsample_ms /= n;
    r.timings_ms.classify_ms /= n;
    r.timings_ms.build_ms /= n;
    r.timings_ms.segment_ms /= n;
    const double total = r.timings_ms.total_ms();
    r.fps = total > 0.0 ? 1000.0 / total : 0.0;
  }
  r.per_scene = std::move(scenes);
  return r;
}

SegmentationResult result_from_assignment(const LabeledCloud& cloud,
                                          const std::vector<std::int32_t>& assignment,
                                          const Eigen::Vector3d& gravity) {
  if (assignment.size() != cloud.size()) throw Error("assignment length does not match cloud");
  std::int32_t max_id = -1;
  for (auto id : assignment) max_id = std::max(max_id, id);
  std::vector<std::vector<PointIndex>> members(static_cast<std::size_t>(max_id + 1));
  SegmentationResult r;
  r.assignment = assignment;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] < 0) r.residual_indices.push_back(static_cast<PointIndex>(i));
    else members[static_cast<std::size_t>(assignment[i])].push_back(static_cast<PointIndex>(i));
  }
  for (auto& m : members) {
    Plane p;
    try {
      p = fit_plane_pca(cloud.points, m, gravity);
    } catch (const Error&) {
      p.point_indices = m;
      p.count = m.size();
    }
    r.planes.push_back(std::move(p));
  }
  return r;
}

namespace {

std::string fmt(double v, int precision) {
  if (std::isnan(v)) return "n/a";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

}  // namespace

void print_metric_table(std::ostream& out, const std::vector<std::string>& columns,
                        const std::vector<EvalReport>& reports) {
  constexpr int kLabel = 18;
  int kCol = 12;
  for (const auto& c : columns) kCol = std::max(kCol, static_cast<int>(c.size()) + 2);
  out << std::left << std::setw(kLabel) << "" << std::right;
  for (const auto& c : columns) out << std::setw(kCol) << c;
  out << '\n' << std::string(kLabel + static_cast<std::size_t>(kCol) * columns.size(), '-') << '\n';
  auto row = [&, kCol](const char* label, auto getter, int precision) {
    out << std::left << std::setw(kLabel) << label << std::right;
    for (const auto& r : reports) out << std::setw(kCol) << fmt(getter(r), precision);
    out << '\n';
  };
  row("alpha (deg)", [](const EvalReport& r) { return r.alpha_deg; }, 2);
  row("r_p (->100)", [](const EvalReport& r) { return r.r_p_percent; }, 0);
  row("r_m (%)", [](const EvalReport& r) { return r.r_m_percent; }, 2);
}

void write_metric_csv(std::ostream& out, const std::vector<std::string>& columns,
                      const std::vector<EvalReport>& reports) {
  out << "column,alpha_deg,r_p_percent,r_m_percent,fps\n";
  for (std::size_t i = 0; i < reports.size() && i < columns.size(); ++i) {
    const auto& r = reports[i];
    out << columns[i] << ',' << fmt(r.alpha_deg, 4) << ',' << fmt(r.r_p_percent, 4) << ','
        << fmt(r.r_m_percent, 4) << ',' << fmt(r.fps, 2) << '\n';
  }
}

}  // namespace planeseg
