#pragma once

#include <vector>

#include "wanderkit/gs_init.hpp"
#include "wanderkit/image.hpp"
#include "wanderkit/recon.hpp"
#include "wanderkit/traj_eval.hpp"

// Single-threaded, deliberately plain versions of the parallel kernels. They
// exist to check the parallel code (tests) and to measure it (bench).

namespace wanderkit::serial {

PairwiseErrors ComputePairwiseErrors(const Trajectory& pred, const Trajectory& gt,
                                     const Mat3& align_rotation, std::size_t max_pairs = 0);

OccupancyGrid Voxelize(const PointCloud& cloud, double voxel_size,
                       std::uint32_t min_points_per_voxel);

TriangleMesh MarchingCubes(const OccupancyGrid& grid, const MarchingCubesOptions& options = {});

// O(n^2) nearest-neighbour search.
std::vector<double> KnnScales(const std::vector<Vec3>& points, std::size_t k,
                              double scale_multiplier);

// Direct 11x11 window sums at every valid pixel.
double Ssim(const Image& pred, const Image& gt, const SsimOptions& options = {});

std::vector<DepthMap> RenderDepthBatch(const GaussianSet& gaussians, const Trajectory& traj,
                                       const CameraIntrinsics& intrinsics, double splat_radius);

}  // namespace wanderkit::serial
