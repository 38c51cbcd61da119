// Parallel kernels against their serial references. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "wanderkit/gs_init.hpp"
#include "wanderkit/image.hpp"
#include "wanderkit/recon.hpp"
#include "wanderkit/serial_reference.hpp"
#include "wanderkit/traj_eval.hpp"

using namespace wanderkit;

namespace {

Trajectory Walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Trajectory t;
  Vec3 p = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    p += 0.1 * Vec3(g(rng), g(rng), g(rng));
    t.poses.emplace_back(Quat(g(rng), g(rng), g(rng), g(rng)).normalized(), p, double(i));
  }
  return t;
}

PointCloud Shell(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back(3.0 * Vec3(g(rng), g(rng), g(rng)).normalized());
  return c;
}

OccupancyGrid Ball(int n) {
  OccupancyGrid grid = OccupancyGrid::Empty(Vec3::Zero(), 1.0, {n, n, n});
  const Vec3 c = Vec3::Constant(n / 2.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) grid.SetOccupied(i, j, k, (grid.CellCenter(i, j, k) - c).norm() < n / 3.0);
  return grid;
}

Image Noise(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(w, h, 3);
  for (double& v : img.values) v = u(rng);
  return img;
}

const Trajectory& Pred() { static const Trajectory t = Walk(400, 1); return t; }
const Trajectory& Gt() { static const Trajectory t = Walk(400, 2); return t; }

void BM_PairwiseParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(ComputePairwiseErrors(Pred(), Gt(), Mat3::Identity()));
}
void BM_PairwiseSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::ComputePairwiseErrors(Pred(), Gt(), Mat3::Identity()));
}

const PointCloud& Cloud() { static const PointCloud c = Shell(400000, 3); return c; }

void BM_VoxelizeParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(Voxelize(Cloud(), 0.05, 1));
}
void BM_VoxelizeSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::Voxelize(Cloud(), 0.05, 1));
}

const OccupancyGrid& Grid() { static const OccupancyGrid g = Ball(96); return g; }

void BM_MarchingCubesParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(MarchingCubes(Grid()));
}
void BM_MarchingCubesSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::MarchingCubes(Grid()));
}

const std::vector<Vec3>& KnnPoints() { static const std::vector<Vec3> p = Shell(5000, 4).points; return p; }

void BM_KnnParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(KnnScales(KnnPoints(), 3, 1.0));
}
void BM_KnnSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::KnnScales(KnnPoints(), 3, 1.0));
}

const Image& ImgA() { static const Image i = Noise(256, 192, 5); return i; }
const Image& ImgB() { static const Image i = Noise(256, 192, 6); return i; }

void BM_SsimParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(Ssim(ImgA(), ImgB()));
}
void BM_SsimSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::Ssim(ImgA(), ImgB()));
}

const GaussianSet& Splats() {
  static const GaussianSet g = [] {
    GaussianSet set;
    for (const Vec3& p : Shell(50000, 7).points) {
      set.centers.push_back(p);
      set.scales.push_back(0.05);
      set.opacities.push_back(0.99);
      set.colors.push_back(Vec3::Constant(0.5));
    }
    return set;
  }();
  return g;
}

const Trajectory& Views() {
  static const Trajectory t = [] {
    Trajectory traj;
    for (int i = 0; i < 16; ++i) traj.poses.emplace_back(Quat::Identity(), Vec3(0.01 * i, 0, 0), double(i));
    return traj;
  }();
  return t;
}

void BM_DepthBatchParallel(benchmark::State& s) {
  const CameraIntrinsics k = CameraIntrinsics::FromFov(90.0, 320, 240);
  for (auto _ : s) benchmark::DoNotOptimize(RenderDepthBatch(Splats(), Views(), k, 1.0));
}
void BM_DepthBatchSerial(benchmark::State& s) {
  const CameraIntrinsics k = CameraIntrinsics::FromFov(90.0, 320, 240);
  for (auto _ : s) benchmark::DoNotOptimize(serial::RenderDepthBatch(Splats(), Views(), k, 1.0));
}

}  // namespace

BENCHMARK(BM_PairwiseParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarchingCubesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarchingCubesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SsimParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SsimSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DepthBatchParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DepthBatchSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
