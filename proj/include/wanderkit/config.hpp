#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "wanderkit/gs_init.hpp"
#include "wanderkit/image.hpp"
#include "wanderkit/nav_sim.hpp"
#include "wanderkit/navmesh.hpp"
#include "wanderkit/recon.hpp"
#include "wanderkit/traj_eval.hpp"

namespace wanderkit {

// Every tunable of the pipeline with its default. Serialized as JSON with
// one object per section (traj_eval, recon, gs, nav, sim, reward, img).
struct Config {
  std::size_t max_images = 500;  // trajectories are subsampled to at most this many poses
  PoseMetricOptions pose_metrics;
  MeshExtractionOptions recon;
  GaussianInitOptions gs;
  NavMeshOptions navmesh;
  EndpointSampling sampling;
  SimConfig sim;  // sim.path holds agent_radius and snap_cap
  RewardConfig reward;
  SsimOptions img;

  // Throws kInvalidArgument naming the offending key.
  void Validate() const;
};

nlohmann::json ConfigToJson(const Config& config);
// Overlays the keys present in `j` onto `config`; unknown sections or keys
// and wrongly typed values are rejected.
void MergeConfig(Config& config, const nlohmann::json& j);
void MergeConfigFile(Config& config, const std::filesystem::path& path);

}  // namespace wanderkit
