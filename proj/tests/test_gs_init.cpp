#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "wanderkit/error.hpp"
#include "wanderkit/gs_init.hpp"
#include "wanderkit/kdtree.hpp"
#include "wanderkit/serial_reference.hpp"

using namespace wanderkit;
using namespace wanderkit::testing;

namespace {

std::vector<Vec3> Lattice(int n, double spacing) {
  std::vector<Vec3> pts;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) pts.emplace_back(i * spacing, j * spacing, k * spacing);
  return pts;
}

}  // namespace

TEST(KdTree, MatchesBruteForceIncludingTies) {
  std::mt19937_64 rng(31);
  std::vector<Vec3> pts = Lattice(6, 0.5);  // many equal distances
  for (int i = 0; i < 300; ++i) pts.push_back(RandomVec(rng, 0.0, 2.5));
  const KdTree tree(pts, 4);
  for (int q = 0; q < 200; ++q) {
    const Vec3 query = q % 2 ? RandomVec(rng, -0.5, 3.0) : pts[q];
    const std::size_t exclude = q % 2 ? SIZE_MAX : static_cast<std::size_t>(q);
    const std::size_t k = 1 + q % 9;
    std::vector<std::pair<double, std::uint32_t>> brute;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      if (i != exclude) brute.emplace_back((pts[i] - query).squaredNorm(), i);
    }
    std::sort(brute.begin(), brute.end());
    const auto got = tree.Nearest(query, k, exclude);
    ASSERT_EQ(got.size(), k);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(got[i].index, brute[i].second);
      EXPECT_EQ(got[i].squared_distance, brute[i].first);
    }
  }
}

TEST(KnnScales, MatchBruteForce) {
  std::mt19937_64 rng(32);
  std::vector<Vec3> pts;
  for (int i = 0; i < 2000; ++i) pts.push_back(RandomVec(rng, -1, 1));
  const auto fast = KnnScales(pts, 3, 1.5);
  const auto slow = serial::KnnScales(pts, 3, 1.5);
  ASSERT_EQ(fast.size(), slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-15);
  EXPECT_THROW(KnnScales({Vec3::Zero(), Vec3::Ones()}, 3, 1.0), Error);
}

TEST(Opacity, UniformLatticeIsFullyOpaque) {
  const auto pts = Lattice(8, 0.125);  // dyadic: distances are exact
  const auto scales = KnnScales(pts, 3, 1.0);
  for (double s : scales) EXPECT_EQ(s, 0.125);
  for (double o : OpacityFromDensity(scales, kMaxInitialOpacity)) EXPECT_EQ(o, 0.99);
}

TEST(Opacity, InverseCubeOfRelativeScale) {
  std::vector<double> scales(9, 0.2);
  scales[4] = 0.4;
  const auto o = OpacityFromDensity(scales, 0.99);
  EXPECT_NEAR(o[4], 0.99 / 8.0, 1e-12);
  EXPECT_EQ(o[0], 0.99);
  // Smaller-than-median scales are capped.
  scales[5] = 0.05;
  EXPECT_EQ(OpacityFromDensity(scales, 0.99)[5], 0.99);
  EXPECT_THROW(OpacityFromDensity({1.0, 0.0}, 0.99), Error);
  EXPECT_THROW(OpacityFromDensity({1.0}, 1.0), Error);
}

TEST(Opacity, BoundedAndMonotone) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> s(500);
  for (double& x : s) x = u(rng);
  const auto o = OpacityFromDensity(s, 0.99);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GT(o[i], 0.0);
    EXPECT_LE(o[i], 0.99);
    for (std::size_t j = 0; j < 20; ++j) {
      if (s[i] < s[j]) {
        EXPECT_GE(o[i], o[j]);
      }
    }
  }
}

TEST(Downsample, DeterministicOrderedSubset) {
  PointCloud cloud;
  for (int i = 0; i < 1000; ++i) {
    cloud.points.emplace_back(i, 0, 0);
    cloud.colors.push_back({static_cast<std::uint8_t>(i % 256), 0, 0});
  }
  const PointCloud a = DownsampleCloud(cloud, 100, 7);
  const PointCloud b = DownsampleCloud(cloud, 100, 7);
  ASSERT_EQ(a.size(), 100u);
  EXPECT_EQ(a.points, b.points);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a.points[i - 1].x(), a.points[i].x());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.colors[i][0], static_cast<int>(a.points[i].x()) % 256);
  }
  EXPECT_NE(DownsampleCloud(cloud, 100, 8).points, a.points);
  EXPECT_EQ(DownsampleCloud(cloud, 5000, 7).size(), 1000u);
}

TEST(InitializeGaussians, ColorsAndValidity) {
  PointCloud cloud;
  cloud.points = Lattice(4, 0.2);
  for (std::size_t i = 0; i < cloud.size(); ++i) cloud.colors.push_back({255, 0, 51});
  GaussianInitOptions o;
  const GaussianSet g = InitializeGaussians(cloud, o);
  ASSERT_EQ(g.size(), cloud.size());
  EXPECT_NO_THROW(g.Validate());
  EXPECT_EQ(g.colors[0], Vec3(1.0, 0.0, 0.2));
  // Duplicate points have zero nearest-neighbour distance.
  PointCloud dup;
  dup.points.assign(10, Vec3::Zero());
  EXPECT_THROW(InitializeGaussians(dup, o), Error);
}

TEST(RenderDepth, PrincipalPixelSeesPointDepthExactly) {
  GaussianSet g;
  g.centers = {Vec3(0, 0, 5)};
  g.scales = {0.1};
  g.opacities = {0.99};
  g.colors = {Vec3::Constant(0.5)};
  const CameraIntrinsics k = CameraIntrinsics::FromFov(90.0, 64, 48);
  const DepthMap d = RenderDepth(g, Pose(), k, 0.0);
  EXPECT_EQ(d.at(32, 24), 5.0f);
  EXPECT_EQ(d.HitCount(), 1u);
  EXPECT_EQ(RenderDepth(g, Pose(), k, 2.0).HitCount(), 13u);  // disc of radius 2
}

TEST(RenderDepth, NearestWinsAndBehindIsIgnored) {
  GaussianSet g;
  g.centers = {Vec3(0, 0, 5), Vec3(0, 0, 3), Vec3(0, 0, -2), Vec3(0, 0, 0.001)};
  g.scales.assign(4, 0.1);
  g.opacities.assign(4, 0.5);
  g.colors.assign(4, Vec3::Zero());
  const CameraIntrinsics k = CameraIntrinsics::FromFov(60.0, 32, 32);
  const DepthMap d = RenderDepth(g, Pose(), k, 0.0);
  EXPECT_EQ(d.at(16, 16), 3.0f);
  EXPECT_EQ(d.HitCount(), 1u);
  EXPECT_EQ(d.at(0, 0), DepthMap::kNoData);
}

TEST(RenderDepth, FollowsCameraPose) {
  GaussianSet g;
  g.centers = {Vec3(10, 0, 0)};
  g.scales = {0.1};
  g.opacities = {0.9};
  g.colors = {Vec3::Zero()};
  // Camera at x = 6 looking along world +x.
  const Pose pose(Quat(Eigen::AngleAxisd(kPi / 2, Vec3::UnitY())), Vec3(6, 0, 0));
  const DepthMap d = RenderDepth(g, pose, CameraIntrinsics::FromFov(90.0, 20, 20), 0.0);
  EXPECT_NEAR(d.at(10, 10), 4.0f, 1e-6);
}

TEST(RenderDepth, BatchMatchesSerial) {
  std::mt19937_64 rng(34);
  GaussianSet g;
  for (int i = 0; i < 3000; ++i) {
    g.centers.push_back(RandomVec(rng, -4, 4));
    g.scales.push_back(0.05);
    g.opacities.push_back(0.9);
    g.colors.push_back(Vec3::Constant(0.3));
  }
  const Trajectory cams = RandomTrajectory(rng, 6, 1.0);
  const CameraIntrinsics k = CameraIntrinsics::FromFov(70.0, 80, 60);
  const auto a = RenderDepthBatch(g, cams, k, 1.5);
  const auto b = serial::RenderDepthBatch(g, cams, k, 1.5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].depth, b[i].depth);
}
