#include "wanderkit/traj_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wanderkit/error.hpp"

namespace wanderkit {
namespace {

void CheckPair(const Trajectory& pred, const Trajectory& gt) {
  if (pred.size() != gt.size()) {
    std::ostringstream msg;
    msg << "trajectory length mismatch: pred has " << pred.size() << " poses, gt has "
        << gt.size();
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  if (pred.size() < 2) Fail(ErrorCode::kInvalidArgument, "metrics need at least 2 poses");
}

double RmseOf(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum / static_cast<double>(values.size()));
}

double AteRmse(const Trajectory& pred, const Trajectory& gt, const Similarity3& xform) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += (xform * pred.poses[i].translation - gt.poses[i].translation).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(pred.size()));
}

double RotationAteDeg(const Trajectory& pred, const Trajectory& gt, const Mat3& align) {
  std::vector<double> angles(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    angles[i] = RadToDeg(
        RotationAngle(gt.poses[i].RotationMatrix(), align * pred.poses[i].RotationMatrix()));
  }
  return RmseOf(angles);
}

struct DirectionStats {
  double rmse = 0.0;
  std::size_t skipped = 0;
};

DirectionStats DirectionRmse(const PairwiseErrors& errors) {
  DirectionStats out;
  double sum = 0.0;
  std::size_t used = 0;
  for (double a : errors.direction_deg) {
    if (std::isnan(a)) {
      ++out.skipped;
      continue;
    }
    sum += a * a;
    ++used;
  }
  if (used == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "translation-direction error undefined: every camera pair is degenerate");
  }
  out.rmse = std::sqrt(sum / static_cast<double>(used));
  return out;
}

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> SelectPairs(std::size_t n,
                                                                 std::size_t max_pairs) {
  const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
  const std::size_t stride =
      (max_pairs == 0 || total <= max_pairs) ? 1 : (total + max_pairs - 1) / max_pairs;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(total / stride + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (k % stride == 0) {
        pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
  return pairs;
}

PairwiseErrors ComputePairwiseErrors(const Trajectory& pred, const Trajectory& gt,
                                     const Mat3& align_rotation, std::size_t max_pairs) {
  CheckPair(pred, gt);
  const std::size_t n = pred.size();
  std::vector<Mat3> pred_rot(n), gt_rot(n);
  for (std::size_t i = 0; i < n; ++i) {
    pred_rot[i] = pred.poses[i].RotationMatrix();
    gt_rot[i] = gt.poses[i].RotationMatrix();
  }

  PairwiseErrors out;
  out.pairs = SelectPairs(n, max_pairs);
  const std::size_t m = out.pairs.size();
  out.distance_diff.resize(m);
  out.direction_deg.resize(m);
  out.rotation_deg.resize(m);

  const auto count = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto [i, j] = out.pairs[static_cast<std::size_t>(k)];
    const Vec3 d_pred = pred.poses[i].translation - pred.poses[j].translation;
    const Vec3 d_gt = gt.poses[i].translation - gt.poses[j].translation;
    const double n_pred = d_pred.norm();
    const double n_gt = d_gt.norm();
    out.distance_diff[k] = n_pred - n_gt;
    out.direction_deg[k] = (n_pred < kMinDirectionNorm || n_gt < kMinDirectionNorm)
                               ? std::numeric_limits<double>::quiet_NaN()
                               : RadToDeg(VectorAngle(align_rotation * d_pred, d_gt));
    const Mat3 rel_pred = pred_rot[i].transpose() * pred_rot[j];
    const Mat3 rel_gt = gt_rot[i].transpose() * gt_rot[j];
    out.rotation_deg[k] = RadToDeg(RotationAngle(rel_gt, rel_pred));
  }
  return out;
}

double TAteRaw(const Trajectory& pred, const Trajectory& gt) {
  CheckPair(pred, gt);
  return AteRmse(pred, gt, AlignSe3(pred, gt).transform);
}

double TAteScaled(const Trajectory& pred, const Trajectory& gt) {
  CheckPair(pred, gt);
  return AteRmse(pred, gt, AlignSim3(pred, gt).transform);
}

double RAte(const Trajectory& pred, const Trajectory& gt) {
  CheckPair(pred, gt);
  return RotationAteDeg(pred, gt, AlignSim3(pred, gt).transform.rotation);
}

double TRte(const Trajectory& pred, const Trajectory& gt) {
  return RmseOf(ComputePairwiseErrors(pred, gt, Mat3::Identity()).distance_diff);
}

double TRteDeg(const Trajectory& pred, const Trajectory& gt, std::size_t* degenerate_pairs) {
  CheckPair(pred, gt);
  const Mat3 align = AlignSim3(pred, gt).transform.rotation;
  const DirectionStats stats = DirectionRmse(ComputePairwiseErrors(pred, gt, align));
  if (degenerate_pairs) *degenerate_pairs = stats.skipped;
  return stats.rmse;
}

double RRte(const Trajectory& pred, const Trajectory& gt) {
  return RmseOf(ComputePairwiseErrors(pred, gt, Mat3::Identity()).rotation_deg);
}

double AucAt30(const Trajectory& pred, const Trajectory& gt) {
  CheckPair(pred, gt);
  const Mat3 align = AlignSim3(pred, gt).transform.rotation;
  return AucFromErrors(MaxPairErrors(ComputePairwiseErrors(pred, gt, align)));
}

double AucFromErrors(std::span<const double> errors_deg, double max_deg) {
  Require(max_deg > 0.0, "AUC threshold must be positive");
  if (errors_deg.empty()) return 0.0;
  // integral_0^T P(e < t) dt = mean over errors of max(0, T - e).
  double area = 0.0;
  for (double e : errors_deg) area += std::max(0.0, max_deg - e);
  return area / (max_deg * static_cast<double>(errors_deg.size()));
}

std::vector<double> MaxPairErrors(const PairwiseErrors& errors) {
  std::vector<double> out(errors.rotation_deg.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double dir = errors.direction_deg[k];
    out[k] = std::isnan(dir) ? errors.rotation_deg[k] : std::max(errors.rotation_deg[k], dir);
  }
  return out;
}

PoseMetricReport EvaluatePoseMetrics(const Trajectory& pred, const Trajectory& gt,
                                     const PoseMetricOptions& options) {
  CheckPair(pred, gt);
  const Alignment se3 = AlignSe3(pred, gt);
  const Alignment sim3 = AlignSim3(pred, gt);

  PoseMetricReport report;
  report.n_poses = pred.size();
  report.alignment_rank_deficient = se3.rank_deficient || sim3.rank_deficient;
  report.t_ate_raw = AteRmse(pred, gt, se3.transform);
  report.t_ate_scaled = AteRmse(pred, gt, sim3.transform);
  report.r_ate = RotationAteDeg(pred, gt, sim3.transform.rotation);

  const PairwiseErrors pairs =
      ComputePairwiseErrors(pred, gt, sim3.transform.rotation, options.max_pairs);
  report.t_rte = RmseOf(pairs.distance_diff);
  report.r_rte = RmseOf(pairs.rotation_deg);
  const DirectionStats dir = DirectionRmse(pairs);
  report.t_rte_deg = dir.rmse;
  report.degenerate_pairs_skipped = dir.skipped;
  report.auc_at_30 = AucFromErrors(MaxPairErrors(pairs));
  return report;
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

DatasetSummary Aggregate(std::span<const PoseMetricReport> reports) {
  Require(!reports.empty(), "aggregate needs at least one scene report");
  DatasetSummary summary;
  summary.n_scenes = reports.size();

  std::vector<const PoseMetricReport*> ok;
  std::size_t successes = 0;
  for (const PoseMetricReport& r : reports) {
    if (r.failed()) {
      ++summary.n_failed;
      continue;
    }
    ok.push_back(&r);
    if (SceneSuccess(r.auc_at_30)) ++successes;
  }
  summary.success_rate = static_cast<double>(successes) / static_cast<double>(reports.size());

  auto stats = [&](double PoseMetricReport::*field) {
    std::vector<double> v;
    v.reserve(ok.size());
    for (const PoseMetricReport* r : ok) v.push_back(r->*field);
    MetricStats s;
    s.mean = v.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.median = Median(std::move(v));
    return s;
  };
  summary.t_ate_raw = stats(&PoseMetricReport::t_ate_raw);
  summary.t_ate_scaled = stats(&PoseMetricReport::t_ate_scaled);
  summary.r_ate = stats(&PoseMetricReport::r_ate);
  summary.t_rte = stats(&PoseMetricReport::t_rte);
  summary.t_rte_deg = stats(&PoseMetricReport::t_rte_deg);
  summary.r_rte = stats(&PoseMetricReport::r_rte);
  summary.auc_at_30 = stats(&PoseMetricReport::auc_at_30);
  return summary;
}

}  // namespace wanderkit
