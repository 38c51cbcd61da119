#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <optional>
#include <string>
#include <vector>

namespace wanderkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// Camera pose as world_from_camera. The unit quaternion is the canonical
// rotation representation; the matrix is derived on demand.
struct Pose {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();
  std::optional<double> timestamp;

  Pose() = default;
  Pose(const Quat& q, const Vec3& t, std::optional<double> stamp = std::nullopt)
      : rotation(q), translation(t), timestamp(stamp) {}
  Pose(const Mat3& r, const Vec3& t, std::optional<double> stamp = std::nullopt);

  Mat3 RotationMatrix() const { return rotation.toRotationMatrix(); }
};

struct Trajectory {
  std::vector<Pose> poses;
  std::string frame_id = "world";

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }

  std::vector<Vec3> Positions() const;
  // Throws if any quaternion is off unit norm by more than 1e-9 or if the
  // timestamps that are present are not strictly increasing.
  void Validate() const;
};

// x -> scale * rotation * x + translation.
struct Similarity3 {
  double scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Similarity3 Identity() { return {}; }

  Vec3 operator*(const Vec3& x) const { return scale * (rotation * x) + translation; }
  Similarity3 operator*(const Similarity3& other) const;
  Similarity3 Inverse() const;
};

struct Alignment {
  Similarity3 transform;
  // Set when the centered source points span fewer than two dimensions
  // (collinear); the rotation about that line is then not unique.
  bool rank_deficient = false;
};

// Closed-form least-squares (Umeyama) alignment mapping pred positions onto
// gt positions. Correspondence is by index.
Alignment AlignSe3(const Trajectory& pred, const Trajectory& gt);
Alignment AlignSim3(const Trajectory& pred, const Trajectory& gt);
Alignment UmeyamaAlign(const std::vector<Vec3>& src, const std::vector<Vec3>& dst,
                       bool estimate_scale);

// t' = s R t + t_align, R' = R_align R_i. Timestamps are kept.
Trajectory ApplyAlignment(const Similarity3& xform, const Trajectory& traj);

// Geodesic angle between two rotations, radians in [0, pi].
double RotationAngle(const Mat3& a, const Mat3& b);
double RotationAngle(const Mat3& relative);
// Angle between two non-zero vectors, radians in [0, pi].
double VectorAngle(const Vec3& a, const Vec3& b);

constexpr double kPi = 3.14159265358979323846;
inline double RadToDeg(double r) { return r * (180.0 / kPi); }
inline double DegToRad(double d) { return d * (kPi / 180.0); }

// Greedy capture keyframing: keep a pose once it has moved at least
// dist_thresh meters or turned at least angle_thresh_deg degrees away from
// the last kept pose. The first pose is always kept.
Trajectory SelectKeyframes(const Trajectory& traj, double dist_thresh,
                           double angle_thresh_deg);

// Every ceil(N / max_count)-th pose starting at index 0.
std::vector<std::size_t> UniformSubsampleIndices(std::size_t n, std::size_t max_count);
Trajectory SubsampleUniform(const Trajectory& traj, std::size_t max_count);

}  // namespace wanderkit
