#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderkit/gs_init.hpp"
#include "wanderkit/nav_sim.hpp"
#include "wanderkit/navmesh.hpp"
#include "wanderkit/traj_eval.hpp"

// JSON, JSONL and CSV forms of reports and navigation artifacts.

namespace wanderkit {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// NaN -> null, +/-infinity -> "inf" / "-inf", otherwise the number.
Json JsonNumber(double v);
// Inverse of JsonNumber.
double NumberFromJson(const Json& j);

Json ToJson(const PoseMetricReport& report);
PoseMetricReport PoseMetricReportFromJson(const Json& j);
Json ToJson(const DatasetSummary& summary);
Json ToJson(const NavReport& report);
Json ToJson(const Path& path);
Json ToJson(const SimConfig& config);
Json ToJson(const RewardConfig& config);

struct SceneReportRow {
  std::string scene_id;
  std::string method;
  PoseMetricReport report;
};

// Header plus one row per scene; failed scenes leave metric cells empty.
std::string SummaryCsv(const std::vector<SceneReportRow>& rows);

// The navmesh refers to its source mesh by path (relative paths resolve
// against the JSON file's directory) and lists the walkable source faces.
void WriteNavMeshJson(const fs::path& path, const NavMesh& navmesh, const std::string& source_mesh,
                      double weld_tolerance = 1e-6);
NavMesh ReadNavMeshJson(const fs::path& path);

void WritePathJson(const fs::path& path, const Path& waypoints);
Path ReadPathJson(const fs::path& path);

Json EpisodeToJson(const Episode& episode, const std::string& scene_id, const SimConfig& sim,
                   const RewardConfig& reward);
Episode EpisodeFromJson(const Json& j);
std::vector<Episode> ReadEpisodesJsonl(const fs::path& path);

CameraIntrinsics ReadIntrinsicsJson(const fs::path& path);

}  // namespace wanderkit
