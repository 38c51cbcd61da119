#include "wanderkit/manifest.hpp"

#include <nlohmann/json.hpp>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

using Json = nlohmann::json;

const char* const kPathKeys[] = {"point_cloud", "gt_trajectory", "mesh",      "navmesh",
                                 "gaussians",   "images_dir",    "depth_dir"};

std::optional<fs::path>* Slot(SceneManifest& m, const std::string& key) {
  if (key == "point_cloud") return &m.point_cloud;
  if (key == "gt_trajectory") return &m.gt_trajectory;
  if (key == "mesh") return &m.mesh;
  if (key == "navmesh") return &m.navmesh;
  if (key == "gaussians") return &m.gaussians;
  if (key == "images_dir") return &m.images_dir;
  if (key == "depth_dir") return &m.depth_dir;
  return nullptr;
}

std::string RequireString(const Json& doc, const char* key, const fs::path& path) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    Fail(ErrorCode::kParse, path.string() + ": field '" + key + "' must be a string");
  }
  return doc[key].get<std::string>();
}

}  // namespace

SceneManifest LoadManifest(const fs::path& path) {
  Json doc;
  try {
    doc = Json::parse(ReadTextFile(path));
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kParse, path.string() + ": manifest must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (key != "format_version" && key != "scene_id" && key != "units" && key != "split" &&
        key != "paths") {
      Fail(ErrorCode::kParse, path.string() + ": unknown manifest key '" + key + "'");
    }
  }

  SceneManifest m;
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    Fail(ErrorCode::kParse, path.string() + ": missing integer format_version");
  }
  m.format_version = doc["format_version"].get<int>();
  if (m.format_version != 1) {
    Fail(ErrorCode::kParse, path.string() + ": unsupported format_version " +
                                std::to_string(m.format_version));
  }
  m.scene_id = RequireString(doc, "scene_id", path);
  if (m.scene_id.empty()) Fail(ErrorCode::kParse, path.string() + ": empty scene_id");
  m.units = doc.contains("units") ? RequireString(doc, "units", path) : "meters";
  if (m.units != "meters") Fail(ErrorCode::kParse, path.string() + ": units must be \"meters\"");
  m.split = RequireString(doc, "split", path);
  if (m.split != "train" && m.split != "extrapolation") {
    Fail(ErrorCode::kParse, path.string() + ": split must be \"train\" or \"extrapolation\"");
  }

  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& rel) {
    const fs::path p(rel);
    return p.is_absolute() ? p : base / p;
  };
  std::vector<std::string> missing;
  auto check = [&](const std::string& key, const fs::path& p) {
    if (!fs::exists(p)) missing.push_back(key + " -> " + p.string());
  };

  const Json paths = doc.value("paths", Json::object());
  if (!paths.is_object()) Fail(ErrorCode::kParse, path.string() + ": 'paths' must be an object");
  for (const auto& [key, value] : paths.items()) {
    if (key == "predicted_trajectories") {
      if (!value.is_object()) {
        Fail(ErrorCode::kParse, path.string() + ": predicted_trajectories must map method to path");
      }
      for (const auto& [method, rel] : value.items()) {
        if (!rel.is_string()) Fail(ErrorCode::kParse, path.string() + ": path for " + method + " is not a string");
        const fs::path p = resolve(rel.get<std::string>());
        m.predicted_trajectories[method] = p;
        check("predicted_trajectories." + method, p);
      }
      continue;
    }
    auto* slot = Slot(m, key);
    if (slot == nullptr) Fail(ErrorCode::kParse, path.string() + ": unknown path key '" + key + "'");
    if (!value.is_string()) Fail(ErrorCode::kParse, path.string() + ": path '" + key + "' is not a string");
    *slot = resolve(value.get<std::string>());
    check(key, **slot);
  }
  if (!missing.empty()) {
    std::string msg = path.string() + ": " + std::to_string(missing.size()) + " referenced path(s) missing:";
    for (const auto& s : missing) msg += "\n  " + s;
    Fail(ErrorCode::kIo, msg);
  }
  return m;
}

void SaveManifest(const fs::path& path, const SceneManifest& m) {
  const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  auto rel = [&](const fs::path& p) {
    std::error_code ec;
    const fs::path r = fs::relative(p, base, ec);
    return (ec || r.empty()) ? p.string() : r.generic_string();
  };
  Json paths = Json::object();
  SceneManifest copy = m;
  for (const char* key : kPathKeys) {
    if (const auto* slot = Slot(copy, key); slot->has_value()) paths[key] = rel(**slot);
  }
  if (!m.predicted_trajectories.empty()) {
    Json preds = Json::object();
    for (const auto& [method, p] : m.predicted_trajectories) preds[method] = rel(p);
    paths["predicted_trajectories"] = preds;
  }
  const Json doc = {{"format_version", m.format_version},
                    {"scene_id", m.scene_id},
                    {"units", m.units},
                    {"split", m.split},
                    {"paths", paths}};
  WriteTextFile(path, doc.dump(2) + "\n");
}

}  // namespace wanderkit
