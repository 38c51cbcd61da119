#include "wanderkit/geom.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "wanderkit/error.hpp"

namespace wanderkit {

Pose::Pose(const Mat3& r, const Vec3& t, std::optional<double> stamp)
    : rotation(Quat(r).normalized()), translation(t), timestamp(stamp) {}

std::vector<Vec3> Trajectory::Positions() const {
  std::vector<Vec3> out;
  out.reserve(poses.size());
  for (const Pose& p : poses) out.push_back(p.translation);
  return out;
}

void Trajectory::Validate() const {
  std::optional<double> prev;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Pose& p = poses[i];
    if (std::abs(p.rotation.norm() - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "pose " << i << ": quaternion norm " << p.rotation.norm() << " is not unit";
      Fail(ErrorCode::kInvalidArgument, msg.str());
    }
    if (!p.translation.allFinite()) {
      Fail(ErrorCode::kInvalidArgument, "pose " + std::to_string(i) + ": non-finite translation");
    }
    if (p.timestamp) {
      if (prev && !(*p.timestamp > *prev)) {
        Fail(ErrorCode::kInvalidArgument,
             "pose " + std::to_string(i) + ": timestamps not strictly increasing");
      }
      prev = p.timestamp;
    }
  }
}

Similarity3 Similarity3::operator*(const Similarity3& other) const {
  Similarity3 out;
  out.scale = scale * other.scale;
  out.rotation = rotation * other.rotation;
  out.translation = scale * (rotation * other.translation) + translation;
  return out;
}

Similarity3 Similarity3::Inverse() const {
  Similarity3 out;
  out.scale = 1.0 / scale;
  out.rotation = rotation.transpose();
  out.translation = -(out.scale * (out.rotation * translation));
  return out;
}

Alignment UmeyamaAlign(const std::vector<Vec3>& src, const std::vector<Vec3>& dst,
                       bool estimate_scale) {
  if (src.size() != dst.size()) {
    std::ostringstream msg;
    msg << "alignment length mismatch: " << src.size() << " vs " << dst.size();
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  if (src.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "alignment needs at least 2 poses");
  }
  const double n = static_cast<double>(src.size());

  Vec3 mean_src = Vec3::Zero();
  Vec3 mean_dst = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    mean_src += src[i];
    mean_dst += dst[i];
  }
  mean_src /= n;
  mean_dst /= n;

  double var_src = 0.0;
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec3 a = src[i] - mean_src;
    const Vec3 b = dst[i] - mean_dst;
    var_src += a.squaredNorm();
    cov += b * a.transpose();
  }
  var_src /= n;
  cov /= n;

  if (!(var_src > 1e-24 * (1.0 + mean_src.squaredNorm()))) {
    Fail(ErrorCode::kDegenerateGeometry,
         "degenerate alignment: all predicted positions coincide");
  }

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const Vec3& sv = svd.singularValues();

  Vec3 signs(1.0, 1.0, 1.0);
  if (u.determinant() * v.determinant() < 0.0) signs.z() = -1.0;

  Alignment out;
  out.transform.rotation = u * signs.asDiagonal() * v.transpose();
  out.transform.scale = estimate_scale ? sv.dot(signs) / var_src : 1.0;
  out.transform.translation =
      mean_dst - out.transform.scale * (out.transform.rotation * mean_src);
  out.rank_deficient = !(sv(1) > 1e-12 * sv(0));
  return out;
}

namespace {

Alignment AlignTrajectories(const Trajectory& pred, const Trajectory& gt, bool scale) {
  if (pred.size() != gt.size()) {
    std::ostringstream msg;
    msg << "trajectory length mismatch: pred has " << pred.size() << " poses, gt has "
        << gt.size();
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  return UmeyamaAlign(pred.Positions(), gt.Positions(), scale);
}

}  // namespace

Alignment AlignSe3(const Trajectory& pred, const Trajectory& gt) {
  return AlignTrajectories(pred, gt, false);
}

Alignment AlignSim3(const Trajectory& pred, const Trajectory& gt) {
  return AlignTrajectories(pred, gt, true);
}

Trajectory ApplyAlignment(const Similarity3& xform, const Trajectory& traj) {
  Trajectory out;
  out.frame_id = traj.frame_id;
  out.poses.reserve(traj.size());
  const Quat q_align(xform.rotation);
  for (const Pose& p : traj.poses) {
    Pose moved = p;
    moved.translation = xform * p.translation;
    moved.rotation = (q_align * p.rotation).normalized();
    out.poses.push_back(moved);
  }
  return out;
}

double RotationAngle(const Mat3& relative) {
  // atan2 form: accurate near 0 and pi, unlike acos((tr - 1) / 2).
  const Vec3 axis(relative(2, 1) - relative(1, 2), relative(0, 2) - relative(2, 0),
                  relative(1, 0) - relative(0, 1));
  const double sin_angle = 0.5 * axis.norm();
  const double cos_angle = 0.5 * (relative.trace() - 1.0);
  return std::atan2(sin_angle, cos_angle);
}

double RotationAngle(const Mat3& a, const Mat3& b) {
  return RotationAngle(Mat3(a.transpose() * b));
}

double VectorAngle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Trajectory SelectKeyframes(const Trajectory& traj, double dist_thresh,
                           double angle_thresh_deg) {
  Require(dist_thresh > 0.0 && angle_thresh_deg > 0.0,
          "keyframe thresholds must be positive");
  // Reaching a threshold counts; the slack absorbs rounding on exact multiples.
  constexpr double kSlack = 1e-9;
  Trajectory out;
  out.frame_id = traj.frame_id;
  if (traj.empty()) return out;

  out.poses.push_back(traj.poses.front());
  Mat3 last_rot = traj.poses.front().RotationMatrix();
  Vec3 last_pos = traj.poses.front().translation;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const Pose& p = traj.poses[i];
    const Mat3 rot = p.RotationMatrix();
    const double dist = (p.translation - last_pos).norm();
    const double angle = RadToDeg(RotationAngle(last_rot, rot));
    if (dist >= dist_thresh - kSlack || angle >= angle_thresh_deg - kSlack) {
      out.poses.push_back(p);
      last_rot = rot;
      last_pos = p.translation;
    }
  }
  return out;
}

std::vector<std::size_t> UniformSubsampleIndices(std::size_t n, std::size_t max_count) {
  Require(max_count >= 1, "max_count must be at least 1");
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  const std::size_t stride = n <= max_count ? 1 : (n + max_count - 1) / max_count;
  for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
  return idx;
}

Trajectory SubsampleUniform(const Trajectory& traj, std::size_t max_count) {
  Trajectory out;
  out.frame_id = traj.frame_id;
  for (std::size_t i : UniformSubsampleIndices(traj.size(), max_count)) {
    out.poses.push_back(traj.poses[i]);
  }
  return out;
}

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCode::kUndefinedMetric: return "undefined_metric";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEmptyNavMesh: return "empty_navmesh";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kInvalidEndpoint: return "invalid_endpoint";
    case ErrorCode::kSamplingFailure: return "sampling_failure";
    case ErrorCode::kHarness: return "harness";
  }
  return "unknown";
}

}  // namespace wanderkit
