#include "wanderkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

using Json = nlohmann::json;
static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seed is stored through a size_t slot");
using Target = std::variant<double*, int*, std::size_t*, std::uint32_t*, bool*>;

struct Entry {
  const char* section;
  const char* key;
  Target target;
};

std::vector<Entry> Entries(Config& c) {
  return {
      {"traj_eval", "max_images", &c.max_images},
      {"traj_eval", "max_pairs", &c.pose_metrics.max_pairs},
      {"recon", "voxel_size", &c.recon.voxel_size},
      {"recon", "min_points", &c.recon.min_points_per_voxel},
      {"recon", "iso", &c.recon.marching_cubes.iso},
      {"recon", "box_smooth", &c.recon.marching_cubes.box_smooth},
      {"recon", "crop_radius", &c.recon.crop_radius},
      {"recon", "height_cut", &c.recon.height_cut},
      {"recon", "min_faces", &c.recon.min_component_faces},
      {"gs", "target_count", &c.gs.target_count},
      {"gs", "k", &c.gs.knn_k},
      {"gs", "scale_multiplier", &c.gs.scale_multiplier},
      {"gs", "max_opacity", &c.gs.max_opacity},
      {"gs", "splat_radius", &c.gs.splat_radius},
      {"gs", "seed", &c.gs.seed},
      {"nav", "max_slope_deg", &c.navmesh.max_slope_deg},
      {"nav", "min_region_faces", &c.navmesh.min_region_faces},
      {"nav", "agent_radius", &c.sim.path.agent_radius},
      {"nav", "snap_cap", &c.sim.path.snap_cap},
      {"nav", "vicinity", &c.sampling.vicinity},
      {"nav", "min_geodesic", &c.sampling.min_geodesic},
      {"nav", "max_attempts", &c.sampling.max_attempts},
      {"sim", "success_radius", &c.sim.success_radius},
      {"sim", "stuck_window", &c.sim.stuck_window},
      {"sim", "stuck_delta", &c.sim.stuck_delta},
      {"sim", "v_max", &c.sim.v_max},
      {"sim", "w_max", &c.sim.w_max},
      {"sim", "dt", &c.sim.dt},
      {"sim", "max_steps", &c.sim.max_steps},
      {"reward", "r_succ", &c.reward.r_succ},
      {"reward", "r_fail", &c.reward.r_fail},
      {"reward", "alpha", &c.reward.alpha},
      {"reward", "beta", &c.reward.beta},
      {"reward", "gamma", &c.reward.gamma},
      {"img", "luminance_only", &c.img.luminance_only},
  };
}

template <typename T>
void AssignInteger(T* dst, const Json& v, const std::string& name) {
  if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
    Fail(ErrorCode::kParse, "config " + name + " must be an integer");
  }
  if (v.is_number_integer() && v.is_number_unsigned()) {
    *dst = static_cast<T>(v.get<std::uint64_t>());
    return;
  }
  const double d = v.get<double>();
  if (std::is_unsigned_v<T> && d < 0) Fail(ErrorCode::kParse, "config " + name + " must be non-negative");
  *dst = static_cast<T>(d);
}

}  // namespace

void Config::Validate() const {
  Require(max_images >= 2, "traj_eval.max_images must be at least 2");
  Require(recon.voxel_size > 0.0, "recon.voxel_size must be positive");
  Require(recon.min_points_per_voxel >= 1, "recon.min_points must be at least 1");
  Require(recon.marching_cubes.iso > 0.0 && recon.marching_cubes.iso < 1.0, "recon.iso must be in (0, 1)");
  Require(recon.crop_radius > 0.0, "recon.crop_radius must be positive");
  Require(std::isfinite(recon.height_cut), "recon.height_cut must be finite");
  Require(gs.target_count >= 1, "gs.target_count must be at least 1");
  Require(gs.knn_k >= 1, "gs.k must be at least 1");
  Require(gs.scale_multiplier > 0.0, "gs.scale_multiplier must be positive");
  Require(gs.max_opacity > 0.0 && gs.max_opacity <= kMaxInitialOpacity, "gs.max_opacity must be in (0, 0.99]");
  Require(gs.splat_radius >= 0.0, "gs.splat_radius must be non-negative");
  Require(navmesh.max_slope_deg > 0.0 && navmesh.max_slope_deg < 90.0, "nav.max_slope_deg must be in (0, 90)");
  Require(sampling.vicinity >= 0.0, "nav.vicinity must be non-negative");
  Require(sampling.min_geodesic >= 0.0, "nav.min_geodesic must be non-negative");
  Require(sampling.max_attempts >= 1, "nav.max_attempts must be at least 1");
  sim.Validate();
  reward.Validate();
}

nlohmann::json ConfigToJson(const Config& config) {
  Config copy = config;
  Json j = Json::object();
  for (const Entry& e : Entries(copy)) {
    std::visit([&](auto* p) { j[e.section][e.key] = *p; }, e.target);
  }
  return j;
}

void MergeConfig(Config& config, const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kParse, "config must be a JSON object");
  const auto entries = Entries(config);
  for (const auto& [section, values] : j.items()) {
    if (!values.is_object()) Fail(ErrorCode::kParse, "config section '" + section + "' must be an object");
    const bool known = std::any_of(entries.begin(), entries.end(),
                                   [&](const Entry& e) { return e.section == section; });
    if (!known) Fail(ErrorCode::kParse, "unknown config section '" + section + "'");
    for (const auto& [key, v] : values.items()) {
      const std::string name = section + "." + key;
      const Entry* found = nullptr;
      for (const Entry& e : entries) {
        if (section == e.section && key == e.key) found = &e;
      }
      if (found == nullptr) Fail(ErrorCode::kParse, "unknown config key '" + name + "'");
      std::visit(
          [&](auto* p) {
            using T = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<T, bool>) {
              if (!v.is_boolean()) Fail(ErrorCode::kParse, "config " + name + " must be a boolean");
              *p = v.get<bool>();
            } else if constexpr (std::is_same_v<T, double>) {
              if (!v.is_number()) Fail(ErrorCode::kParse, "config " + name + " must be a number");
              *p = v.get<double>();
            } else {
              AssignInteger(p, v, name);
            }
          },
          found->target);
    }
  }
}

void MergeConfigFile(Config& config, const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadTextFile(path));
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  try {
    MergeConfig(config, j);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace wanderkit
