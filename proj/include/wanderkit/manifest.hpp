#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace wanderkit {

namespace fs = std::filesystem;

// One scene's artifacts. Paths in the JSON document are relative to the
// manifest's directory; here they are already resolved.
struct SceneManifest {
  int format_version = 1;
  std::string scene_id;
  std::string units = "meters";
  std::string split = "train";  // "train" or "extrapolation"

  std::optional<fs::path> point_cloud;
  std::optional<fs::path> gt_trajectory;
  std::map<std::string, fs::path> predicted_trajectories;  // by method
  std::optional<fs::path> mesh;
  std::optional<fs::path> navmesh;
  std::optional<fs::path> gaussians;
  std::optional<fs::path> images_dir;
  std::optional<fs::path> depth_dir;
};

// Validates the document and checks that every referenced path exists; all
// missing paths are reported together (kIo), schema problems as kParse.
SceneManifest LoadManifest(const fs::path& path);
// Paths are written relative to the manifest's directory when possible.
void SaveManifest(const fs::path& path, const SceneManifest& manifest);

}  // namespace wanderkit
