#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wanderkit/geom.hpp"

namespace wanderkit {

// Camera-pose accuracy metrics. Translations are meters, angles degrees.
//
// Pairwise metrics run over all unordered pairs i < j. Relative rotations are
// R_i^T R_j for world_from_camera poses (equivalently R_i R_j^T for
// camera_from_world extrinsics), so they are unaffected by a global gauge.
// Rotation-ATE and direction-RTE use the SIM(3) alignment rotation to remove
// the gauge before comparing.

struct PoseMetricOptions {
  // 0 evaluates every pair; otherwise an evenly strided subset of at most
  // this many pairs.
  std::size_t max_pairs = 0;
};

struct PoseMetricReport {
  double t_ate_raw = 0.0;
  double t_ate_scaled = 0.0;
  double r_ate = 0.0;
  double t_rte = 0.0;
  double t_rte_deg = 0.0;
  double r_rte = 0.0;
  double auc_at_30 = 0.0;
  std::size_t n_poses = 0;
  std::size_t degenerate_pairs_skipped = 0;
  bool alignment_rank_deficient = false;

  // A scene whose reconstruction produced no poses.
  bool failed() const { return n_poses == 0; }
};

struct MetricStats {
  double mean = 0.0;
  double median = 0.0;
};

struct DatasetSummary {
  std::size_t n_scenes = 0;
  std::size_t n_failed = 0;
  double success_rate = 0.0;
  MetricStats t_ate_raw, t_ate_scaled, r_ate, t_rte, t_rte_deg, r_rte, auc_at_30;
};

// Per-pair errors for the selected pairs, in pair order.
struct PairwiseErrors {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<double> distance_diff;    // |t_i - t_j|_pred - |t_i - t_j|_gt, meters
  std::vector<double> direction_deg;    // NaN when a relative translation is ~0
  std::vector<double> rotation_deg;
};

// Relative translations shorter than this have no defined direction.
inline constexpr double kMinDirectionNorm = 1e-9;

std::vector<std::pair<std::uint32_t, std::uint32_t>> SelectPairs(std::size_t n,
                                                                 std::size_t max_pairs);

// `align_rotation` is applied to predicted relative translations before the
// direction comparison. OpenMP-parallel over pairs; see serial_reference.hpp
// for the single-threaded version.
PairwiseErrors ComputePairwiseErrors(const Trajectory& pred, const Trajectory& gt,
                                     const Mat3& align_rotation, std::size_t max_pairs = 0);

double TAteRaw(const Trajectory& pred, const Trajectory& gt);
double TAteScaled(const Trajectory& pred, const Trajectory& gt);
double RAte(const Trajectory& pred, const Trajectory& gt);
double TRte(const Trajectory& pred, const Trajectory& gt);
// Throws kUndefinedMetric when every pair is degenerate.
double TRteDeg(const Trajectory& pred, const Trajectory& gt,
               std::size_t* degenerate_pairs = nullptr);
double RRte(const Trajectory& pred, const Trajectory& gt);
double AucAt30(const Trajectory& pred, const Trajectory& gt);

// Normalized area under the CDF of `errors_deg` on [0, max_deg]; exact for
// the empirical (piecewise-constant) distribution.
double AucFromErrors(std::span<const double> errors_deg, double max_deg = 30.0);

// max(rotation, direction) per pair; degenerate pairs use rotation only.
std::vector<double> MaxPairErrors(const PairwiseErrors& errors);

PoseMetricReport EvaluatePoseMetrics(const Trajectory& pred, const Trajectory& gt,
                                     const PoseMetricOptions& options = {});

inline constexpr double kSceneSuccessAuc = 0.1;
inline bool SceneSuccess(double auc) { return auc > kSceneSuccessAuc; }

// Failed scenes are excluded from the error statistics and count as
// non-successes. Throws on an empty list.
DatasetSummary Aggregate(std::span<const PoseMetricReport> reports);

double Median(std::vector<double> values);

}  // namespace wanderkit
