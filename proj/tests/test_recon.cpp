#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

#include "support.hpp"
#include "wanderkit/error.hpp"
#include "wanderkit/recon.hpp"
#include "wanderkit/serial_reference.hpp"

using namespace wanderkit;
using namespace wanderkit::testing;

TEST(Voxelize, CountsPointsPerCell) {
  PointCloud cloud;
  cloud.points = {Vec3(0.03, 0.03, 0.03), Vec3(0.07, 0.06, 0.07), Vec3(0.95, 0.95, 0.95),
                  Vec3(-1, -1, -1)};
  const OccupancyGrid g = Voxelize(cloud, 0.1, 2);
  // Bounds are the AABB padded by one voxel.
  EXPECT_LT((g.origin - Vec3(-1.1, -1.1, -1.1)).norm(), 1e-12);
  EXPECT_EQ(g.dims, (std::array<int, 3>{22, 22, 22}));
  EXPECT_EQ(g.OccupiedCount(), 1u);
  std::uint32_t total = 0;
  for (auto c : g.counts) total += c;
  EXPECT_EQ(total, 4u);
  const auto cell = g.CellOf(cloud.points[0]);
  EXPECT_TRUE(g.Occupied(cell[0], cell[1], cell[2]));
  EXPECT_THROW(Voxelize(cloud, 0.0, 1), Error);
  EXPECT_THROW(Voxelize(cloud, 0.1, 0), Error);
}

TEST(Voxelize, ParallelMatchesSerial) {
  std::mt19937_64 rng(21);
  PointCloud cloud;
  for (int i = 0; i < 20000; ++i) cloud.points.push_back(RandomVec(rng, -2, 2));
  const OccupancyGrid a = Voxelize(cloud, 0.1, 2);
  const OccupancyGrid b = serial::Voxelize(cloud, 0.1, 2);
  EXPECT_EQ(a.dims, b.dims);
  EXPECT_EQ(a.origin, b.origin);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(CaseTable, TrianglesOnlyUseCrossingEdges) {
  const auto& edges = CubeEdges();
  EXPECT_TRUE(CaseTriangles(0).empty());
  EXPECT_TRUE(CaseTriangles(255).empty());
  for (int config = 1; config < 255; ++config) {
    EXPECT_FALSE(CaseTriangles(config).empty()) << config;
    for (const auto& tri : CaseTriangles(config)) {
      for (auto e : tri) {
        const bool a = (config >> edges[e].from) & 1;
        const bool b = (config >> edges[e].to) & 1;
        EXPECT_NE(a, b) << "config " << config << " edge " << int(e);
      }
    }
  }
}

TEST(CaseTable, ComplementHasSameTriangleCount) {
  // Flipping inside/outside keeps the same crossing edges.
  for (int config = 1; config < 255; ++config) {
    std::set<int> used, used_c;
    for (const auto& t : CaseTriangles(config)) used.insert(t.begin(), t.end());
    for (const auto& t : CaseTriangles(255 - config)) used_c.insert(t.begin(), t.end());
    EXPECT_EQ(used, used_c) << config;
  }
}

TEST(MarchingCubes, BallIsClosedSphere) {
  const auto t0 = std::chrono::steady_clock::now();
  const TriangleMesh m = MarchingCubes(BallGrid(64, 10.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  const auto use = EdgeUse(m);
  for (const auto& [edge, count] : use) ASSERT_EQ(count, 2) << edge.first << "-" << edge.second;
  const long euler = static_cast<long>(m.vertices.size()) - static_cast<long>(use.size()) +
                     static_cast<long>(m.num_faces());
  EXPECT_EQ(euler, 2);
  EXPECT_NO_THROW(m.Validate());
  // Normals point away from the centre.
  const Vec3 centre = Vec3::Constant(32.0);
  for (std::size_t f = 0; f < m.num_faces(); ++f) {
    EXPECT_GT(m.AreaNormal(f).dot(m.Centroid(f) - centre), 0.0);
  }
}

TEST(MarchingCubes, HalfSpaceHugsPlane) {
  const int n = 32;
  OccupancyGrid g = OccupancyGrid::Empty(Vec3::Zero(), 1.0, {n, n, n});
  const Vec3 normal = Vec3(0.3, -0.2, 1.0).normalized();
  const Vec3 on_plane(16.0, 16.0, 15.3);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        g.SetOccupied(i, j, k, normal.dot(g.CellCenter(i, j, k) - on_plane) < 0.0);
  const TriangleMesh m = MarchingCubes(g);
  ASSERT_FALSE(m.empty());
  for (const Vec3& v : m.vertices) EXPECT_LE(std::abs(normal.dot(v - on_plane)), 0.5);
  for (std::size_t f = 0; f < m.num_faces(); ++f) EXPECT_GT(m.AreaNormal(f).dot(normal), 0.0);
}

TEST(MarchingCubes, ParallelMatchesSerialBitForBit) {
  std::mt19937_64 rng(22);
  std::bernoulli_distribution coin(0.4);
  OccupancyGrid g = OccupancyGrid::Empty(Vec3(1, 2, 3), 0.25, {24, 20, 28});
  for (auto& c : g.counts) c = coin(rng) ? 1 : 0;
  for (bool smooth : {false, true}) {
    MarchingCubesOptions o;
    o.box_smooth = smooth;
    const TriangleMesh a = MarchingCubes(g, o);
    const TriangleMesh b = serial::MarchingCubes(g, o);
    EXPECT_EQ(a.triangles, b.triangles);
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) EXPECT_EQ(a.vertices[i], b.vertices[i]);
  }
}

TEST(MarchingCubes, RandomFieldsGiveManifoldEdges) {
  // Away from the grid boundary every edge is shared by exactly two faces.
  std::mt19937_64 rng(23);
  std::bernoulli_distribution coin(0.5);
  OccupancyGrid g = OccupancyGrid::Empty(Vec3::Zero(), 1.0, {16, 16, 16});
  for (int k = 1; k < 15; ++k)
    for (int j = 1; j < 15; ++j)
      for (int i = 1; i < 15; ++i) g.SetOccupied(i, j, k, coin(rng));
  const TriangleMesh m = MarchingCubes(g);
  for (const auto& [edge, count] : EdgeUse(m)) EXPECT_EQ(count, 2);
}

TEST(MarchingCubes, EmptyAndTinyGrids) {
  EXPECT_TRUE(MarchingCubes(OccupancyGrid::Empty(Vec3::Zero(), 1.0, {8, 8, 8})).empty());
  EXPECT_TRUE(MarchingCubes(OccupancyGrid::Empty(Vec3::Zero(), 1.0, {1, 5, 5})).empty());
}

TEST(Components, LabelsAndFilter) {
  const TriangleMesh m = Concat(Strip(40, 0.0), Strip(60, 100.0));
  const ComponentLabels labels = LabelComponents(m);
  ASSERT_EQ(labels.component_faces.size(), 2u);
  EXPECT_EQ(labels.component_faces[0], 40u);
  EXPECT_EQ(labels.component_faces[1], 60u);

  const TriangleMesh kept = FilterSmallComponents(m, 50);
  ASSERT_EQ(kept.num_faces(), 60u);
  for (const Vec3& v : kept.vertices) EXPECT_GE(v.x(), 100.0);
  EXPECT_EQ(FilterSmallComponents(m, 40).num_faces(), 100u);
  EXPECT_EQ(FilterSmallComponents(m, 61).num_faces(), 0u);
}

TEST(Components, WeldJoinsDuplicatedVertices) {
  // Two triangles touching at coordinates but not at indices.
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(1, 1, 0),
                Vec3(0, 1, 0)};
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  EXPECT_EQ(LabelComponents(m).component_faces.size(), 1u);
  const auto rep = WeldVertices(m.vertices);
  EXPECT_EQ(rep[3], 1u);
  EXPECT_EQ(rep[5], 2u);
  for (std::size_t i = 0; i < rep.size(); ++i) EXPECT_EQ(rep[rep[i]], rep[i]);
}

TEST(Crop, RadiusAndHeight) {
  TriangleMesh m = Concat(Box(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)),
                          Box(Vec3(9.5, -0.5, -0.5), Vec3(10.5, 0.5, 0.5)));
  m = Concat(m, Box(Vec3(-0.5, -0.5, 5.0), Vec3(0.5, 0.5, 6.0)));
  Trajectory cams;
  cams.poses.emplace_back(Quat::Identity(), Vec3(0, 0, 1.0));
  const TriangleMesh cropped = CropByTrajectory(m, cams, 3.0, 3.0);
  EXPECT_EQ(cropped.num_faces(), 12u);
  for (const Vec3& v : cropped.vertices) EXPECT_LT(v.norm(), 1.0);
  EXPECT_EQ(CropByTrajectory(m, cams, 30.0, 3.0).num_faces(), 24u);
  EXPECT_EQ(CropByTrajectory(m, cams, 30.0, 10.0).num_faces(), 36u);
  EXPECT_THROW(CropByTrajectory(m, Trajectory{}, 3.0, 3.0), Error);
}

TEST(Extraction, RoomFloorIsFlatAndConnected) {
  const Room room = SyntheticRoom(6.0);
  const TriangleMesh mesh = ExtractCollisionMesh(room.cloud, room.cameras, {});
  ASSERT_GT(mesh.num_faces(), 1000u);
  // The floor points fill one voxel layer whose top lies one voxel above z = 0.
  std::size_t up = 0;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Vec3 n = mesh.AreaNormal(f).normalized();
    if (n.z() > 0.999 && mesh.Centroid(f).z() < 1.0) {
      ++up;
      EXPECT_NEAR(mesh.Centroid(f).z(), 0.1, 1e-9);
    }
  }
  EXPECT_GT(up, 4000u);
  for (auto c : LabelComponents(mesh).component_faces) EXPECT_GE(c, 50u);
}
