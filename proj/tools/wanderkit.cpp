// wanderkit command-line entry point. JSON results go to stdout, logs and
// errors to stderr. Exit codes: 0 ok, 2 degenerate/undefined metric,
// 64 usage, 65 data error, 70 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wanderkit/config.hpp"
#include "wanderkit/error.hpp"
#include "wanderkit/gs_init.hpp"
#include "wanderkit/image.hpp"
#include "wanderkit/io.hpp"
#include "wanderkit/manifest.hpp"
#include "wanderkit/nav_sim.hpp"
#include "wanderkit/navmesh.hpp"
#include "wanderkit/recon.hpp"
#include "wanderkit/serialize.hpp"
#include "wanderkit/traj_eval.hpp"

namespace wk = wanderkit;
using wk::Json;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kDegenerate = 2, kUsage = 64, kData = 65, kInternal = 70 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void PrintError(const std::string& kind, const std::string& message) {
  const Json j = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << std::endl;
}

int ExitFor(wk::ErrorCode code) {
  switch (code) {
    case wk::ErrorCode::kDegenerateGeometry:
    case wk::ErrorCode::kUndefinedMetric: return kDegenerate;
    case wk::ErrorCode::kHarness: return kInternal;
    default: return kData;
  }
}

void Emit(const Json& j) { std::cout << j.dump(2) << std::endl; }

wk::Vec3 ParsePoint(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " expects x,y,z but got '" + text + "'");
    }
  }
  if (v.size() != 3) throw UsageError(std::string(flag) + " expects x,y,z but got '" + text + "'");
  return {v[0], v[1], v[2]};
}

// Loads both trajectories, logs load warnings, and subsamples them to the
// configured image budget.
std::pair<wk::Trajectory, wk::Trajectory> LoadPair(const wk::fs::path& pred_path,
                                                   const wk::fs::path& gt_path,
                                                   std::size_t max_images) {
  auto load = [](const wk::fs::path& p) {
    wk::TumLoadReport report;
    wk::Trajectory t = wk::ReadTum(p, &report);
    if (report.reordered > 0) {
      std::cerr << p.string() << ": " << report.reordered << " pose(s) out of timestamp order; sorted\n";
    }
    if (report.renormalized > 0) {
      std::cerr << p.string() << ": renormalized " << report.renormalized << " quaternion(s)\n";
    }
    return t;
  };
  wk::Trajectory pred = load(pred_path);
  wk::Trajectory gt = load(gt_path);
  if (pred.size() != gt.size()) {
    wk::Fail(wk::ErrorCode::kParse, "trajectories differ in length: " + std::to_string(pred.size()) +
                                        " predicted vs " + std::to_string(gt.size()) +
                                        " ground-truth poses (poses correspond by index)");
  }
  return {wk::SubsampleUniform(pred, max_images), wk::SubsampleUniform(gt, max_images)};
}

std::vector<wk::fs::path> SortedFiles(const wk::fs::path& dir, const std::vector<std::string>& exts) {
  if (!wk::fs::is_directory(dir)) wk::Fail(wk::ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<wk::fs::path> files;
  for (const auto& entry : wk::fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Manifests of a dataset: top-level *.json files and */manifest.json.
std::vector<wk::fs::path> FindManifests(const wk::fs::path& dir) {
  std::vector<wk::fs::path> out = SortedFiles(dir, {".json"});
  std::vector<wk::fs::path> nested;
  for (const auto& entry : wk::fs::directory_iterator(dir)) {
    if (entry.is_directory() && wk::fs::exists(entry.path() / "manifest.json")) {
      nested.push_back(entry.path() / "manifest.json");
    }
  }
  std::sort(nested.begin(), nested.end());
  out.insert(out.end(), nested.begin(), nested.end());
  return out;
}

std::string RelativeTo(const wk::fs::path& target, const wk::fs::path& from_file) {
  std::error_code ec;
  const auto base = wk::fs::absolute(from_file, ec).parent_path();
  const auto rel = wk::fs::relative(wk::fs::absolute(target, ec), base, ec);
  return (ec || rel.empty()) ? wk::fs::absolute(target).string() : rel.generic_string();
}

struct Options {
  std::string config_file;
  std::vector<std::string> overrides;
  bool version = false;
  bool config_dump = false;

  std::string gt, pred, manifest_dir, csv, cloud, traj, out, mesh, navmesh, start, goal;
  std::string gaussians, intrinsics, manifest, policy, episodes_path, pred_dir, gt_dir;
  std::size_t max_images = 0;
  std::size_t episodes = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
};

void ApplyOverrides(wk::Config& config, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    const auto dot = item.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw UsageError("--set expects section.key=value, got '" + item + "'");
    }
    const std::string section = item.substr(0, dot);
    const std::string key = item.substr(dot + 1, eq - dot - 1);
    Json value;
    try {
      value = Json::parse(item.substr(eq + 1));
    } catch (const Json::exception&) {
      throw UsageError("--set value for " + section + "." + key + " is not a JSON scalar");
    }
    try {
      wk::MergeConfig(config, Json{{section, {{key, value}}}});
    } catch (const wk::Error& e) {
      throw UsageError(e.what());
    }
  }
}

// ---- subcommands ----

int EvalTraj(const Options& o, const wk::Config& cfg) {
  const auto [pred, gt] = LoadPair(o.pred, o.gt, cfg.max_images);
  const wk::PoseMetricReport report = wk::EvaluatePoseMetrics(pred, gt, cfg.pose_metrics);
  Emit(wk::ToJson(report));
  if (report.alignment_rank_deficient) {
    std::cerr << "warning: predicted positions are collinear; rotation about that line is not "
                 "determined\n";
  }
  return kOk;
}

int EvalDataset(const Options& o, const wk::Config& cfg) {
  const auto manifest_paths = FindManifests(o.manifest_dir);
  if (manifest_paths.empty()) wk::Fail(wk::ErrorCode::kIo, "no manifests found in " + o.manifest_dir);
  std::vector<wk::SceneManifest> scenes;
  for (const auto& p : manifest_paths) scenes.push_back(wk::LoadManifest(p));
  std::vector<std::string> methods;
  for (const auto& s : scenes) {
    if (!s.gt_trajectory) wk::Fail(wk::ErrorCode::kParse, s.scene_id + ": manifest lacks gt_trajectory");
    for (const auto& [m, path] : s.predicted_trajectories) methods.push_back(m);
  }
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  // One job per (scene, method); results land in fixed slots so the merge
  // order does not depend on scheduling.
  const std::size_t n_jobs = scenes.size() * methods.size();
  std::vector<wk::SceneReportRow> rows(n_jobs);
  std::vector<std::string> errors(n_jobs);
  std::vector<int> error_codes(n_jobs, -1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, o.jobs))
  for (std::int64_t job = 0; job < static_cast<std::int64_t>(n_jobs); ++job) {
    const auto& scene = scenes[static_cast<std::size_t>(job) / methods.size()];
    const auto& method = methods[static_cast<std::size_t>(job) % methods.size()];
    wk::SceneReportRow& row = rows[job];
    row.scene_id = scene.scene_id;
    row.method = method;
    const auto it = scene.predicted_trajectories.find(method);
    if (it == scene.predicted_trajectories.end()) continue;  // failed scene
    try {
      const wk::Trajectory raw = wk::ReadTum(it->second);
      if (raw.empty()) continue;
      const auto [pred, gt] = LoadPair(it->second, *scene.gt_trajectory, cfg.max_images);
      row.report = wk::EvaluatePoseMetrics(pred, gt, cfg.pose_metrics);
    } catch (const wk::Error& e) {
      errors[job] = e.what();
      error_codes[job] = static_cast<int>(e.code());
    }
  }
  for (std::size_t job = 0; job < n_jobs; ++job) {
    if (error_codes[job] < 0) continue;
    const auto code = static_cast<wk::ErrorCode>(error_codes[job]);
    if (ExitFor(code) == kDegenerate) {
      std::cerr << rows[job].scene_id << "/" << rows[job].method
                << ": degenerate prediction counted as a failed scene: " << errors[job] << "\n";
      rows[job].report = wk::PoseMetricReport{};
    } else {
      wk::Fail(code, rows[job].scene_id + "/" + rows[job].method + ": " + errors[job]);
    }
  }

  Json summaries = Json::object();
  Json scene_reports = Json::array();
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<wk::PoseMetricReport> reports;
    for (std::size_t si = 0; si < scenes.size(); ++si) reports.push_back(rows[si * methods.size() + mi].report);
    summaries[methods[mi]] = wk::ToJson(wk::Aggregate(reports));
  }
  for (const auto& row : rows) {
    scene_reports.push_back({{"scene_id", row.scene_id}, {"method", row.method}, {"report", wk::ToJson(row.report)}});
  }
  const wk::fs::path csv = o.csv.empty() ? wk::fs::path(o.manifest_dir) / "summary.csv" : wk::fs::path(o.csv);
  wk::WriteTextFile(csv, wk::SummaryCsv(rows));
  Emit({{"methods", summaries}, {"scenes", scene_reports}, {"csv", csv.string()}});
  return kOk;
}

int ExtractMesh(const Options& o, const wk::Config& cfg) {
  const wk::PointCloud cloud = wk::ReadPointCloudPly(o.cloud);
  const wk::Trajectory traj = wk::ReadTum(o.traj);
  const wk::TriangleMesh mesh = wk::ExtractCollisionMesh(cloud, traj, cfg.recon);
  wk::WriteMesh(o.out, mesh);
  Emit({{"output", o.out}, {"vertices", mesh.vertices.size()}, {"faces", mesh.num_faces()}});
  return kOk;
}

int BakeNavMesh(const Options& o, const wk::Config& cfg) {
  const wk::TriangleMesh mesh = wk::ReadMesh(o.mesh);
  const wk::NavMesh nav = wk::NavMesh::Bake(mesh, cfg.navmesh);
  wk::WriteNavMeshJson(o.out, nav, RelativeTo(o.mesh, o.out), cfg.navmesh.weld_tolerance);
  Emit({{"output", o.out}, {"triangles", nav.num_triangles()}, {"regions", nav.num_regions()}});
  return kOk;
}

int Plan(const Options& o, const wk::Config& cfg) {
  const wk::Vec3 start = ParsePoint(o.start, "--start");
  const wk::Vec3 goal = ParsePoint(o.goal, "--goal");
  const wk::NavMesh nav = wk::ReadNavMeshJson(o.navmesh);
  const wk::Path path = wk::ShortestPath(nav, start, goal, cfg.sim.path);
  wk::WritePathJson(o.out, path);
  Emit({{"output", o.out}, {"length", path.length}, {"waypoints", path.waypoints.size()}});
  return kOk;
}

int InitGaussians(const Options& o, wk::Config cfg) {
  const wk::PointCloud cloud = wk::ReadPointCloudPly(o.cloud);
  const wk::GaussianSet set = wk::InitializeGaussians(cloud, cfg.gs);
  wk::WriteGaussiansPly(o.out, set);
  Emit({{"output", o.out}, {"gaussians", set.size()}, {"seed", cfg.gs.seed}});
  return kOk;
}

int RenderDepth(const Options& o, const wk::Config& cfg) {
  const wk::GaussianSet set = wk::ReadGaussiansPly(o.gaussians);
  const wk::Trajectory traj = wk::ReadTum(o.traj);
  const wk::CameraIntrinsics k = wk::ReadIntrinsicsJson(o.intrinsics);
  const auto maps = wk::RenderDepthBatch(set, traj, k, cfg.gs.splat_radius);
  wk::fs::create_directories(o.out);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "depth_%06zu.wkd", i);
    wk::WriteDepthMap(wk::fs::path(o.out) / name, maps[i]);
  }
  Emit({{"output", o.out}, {"frames", maps.size()}});
  return kOk;
}

std::vector<std::string> SplitCommand(const std::string& text) {
  std::istringstream ss(text);
  std::vector<std::string> argv;
  for (std::string a; ss >> a;) argv.push_back(a);
  return argv;
}

int RunEpisodes(const Options& o, const wk::Config& cfg) {
  const wk::SceneManifest scene = wk::LoadManifest(o.manifest);
  if (!scene.navmesh) wk::Fail(wk::ErrorCode::kParse, o.manifest + ": manifest lacks a navmesh path");
  if (!scene.gt_trajectory) wk::Fail(wk::ErrorCode::kParse, o.manifest + ": manifest lacks gt_trajectory");
  const wk::NavMesh nav = wk::ReadNavMeshJson(*scene.navmesh);
  const wk::Trajectory cameras = wk::ReadTum(*scene.gt_trajectory);

  wk::PolicyFactory factory;
  if (o.policy == "builtin:expert") {
    factory = [&](std::size_t, const wk::Vec3& goal) -> wk::Policy {
      return wk::ExpertPolicy(nav, goal, cfg.sim);
    };
  } else if (o.policy == "builtin:random") {
    factory = [&](std::size_t index, const wk::Vec3&) -> wk::Policy {
      return wk::RandomPolicy(o.seed + 0x9e3779b97f4a7c15ull * (index + 1), cfg.sim);
    };
  } else if (o.policy.rfind("exec:", 0) == 0) {
    const auto argv = SplitCommand(o.policy.substr(5));
    if (argv.empty()) throw UsageError("--policy exec: needs a command, e.g. exec:./my_policy");
    factory = [argv](std::size_t, const wk::Vec3&) -> wk::Policy {
      auto proc = std::make_shared<wk::ProcessPolicy>(argv);
      return [proc](const wk::Observation& obs) { return (*proc)(obs); };
    };
  } else {
    throw UsageError("--policy must be builtin:expert, builtin:random or exec:<command>");
  }

  const auto episodes = wk::RunEpisodes(nav, cameras, o.episodes, o.seed, factory, cfg.sim,
                                        cfg.reward, cfg.sampling);
  std::string lines;
  std::size_t harness_errors = 0;
  for (const auto& ep : episodes) {
    lines += wk::EpisodeToJson(ep, scene.scene_id, cfg.sim, cfg.reward).dump() + "\n";
    if (ep.termination == wk::Termination::kHarnessError) {
      ++harness_errors;
      std::cerr << "episode seed " << ep.seed << ": policy failed: " << ep.harness_error << "\n";
    }
  }
  wk::WriteTextFile(o.out, lines);
  Emit({{"output", o.out}, {"episodes", episodes.size()}, {"harness_errors", harness_errors}});
  return kOk;
}

int EvalNav(const Options& o, const wk::Config&) {
  const auto episodes = wk::ReadEpisodesJsonl(o.episodes_path);
  Emit(wk::ToJson(wk::Evaluate(episodes)));
  return kOk;
}

int EvalNvs(const Options& o, const wk::Config& cfg) {
  const std::vector<std::string> exts = {".png", ".ppm", ".pgm"};
  const auto gt_files = SortedFiles(o.gt_dir, exts);
  if (gt_files.empty()) wk::Fail(wk::ErrorCode::kIo, "no images in " + o.gt_dir);
  std::vector<std::string> missing;
  for (const auto& g : gt_files) {
    if (!wk::fs::exists(wk::fs::path(o.pred_dir) / g.filename())) missing.push_back(g.filename().string());
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " prediction(s) missing in " + o.pred_dir + ":";
    for (const auto& m : missing) msg += " " + m;
    wk::Fail(wk::ErrorCode::kIo, msg);
  }
  const auto n = static_cast<std::int64_t>(gt_files.size());
  std::vector<double> psnr(gt_files.size()), ssim(gt_files.size());
  std::vector<std::string> errors(gt_files.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const wk::Image gt = wk::ReadImage(gt_files[i]);
      const wk::Image pred = wk::ReadImage(wk::fs::path(o.pred_dir) / gt_files[i].filename());
      psnr[i] = wk::Psnr(pred, gt);
      ssim[i] = wk::Ssim(pred, gt, cfg.img);
    } catch (const std::exception& e) {
      errors[i] = gt_files[i].filename().string() + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) wk::Fail(wk::ErrorCode::kParse, e);
  }
  Json images = Json::array();
  double psnr_sum = 0.0, ssim_sum = 0.0;
  for (std::size_t i = 0; i < gt_files.size(); ++i) {
    images.push_back({{"name", gt_files[i].filename().string()},
                      {"psnr", wk::JsonNumber(psnr[i])},
                      {"ssim", wk::JsonNumber(ssim[i])}});
    psnr_sum += psnr[i];
    ssim_sum += ssim[i];
  }
  const double count = static_cast<double>(gt_files.size());
  Emit({{"images", images},
        {"mean", {{"psnr", wk::JsonNumber(psnr_sum / count)}, {"ssim", wk::JsonNumber(ssim_sum / count)}}}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wanderkit: pose-accuracy, reconstruction, navigation and image-quality tools"};
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_file, "JSON config file (default: $WANDERKIT_CONFIG)");
  app.add_option("--set", o.overrides, "Override one config value, e.g. --set sim.max_steps=200");
  app.add_flag("--version", o.version, "Print version and effective configuration");
  app.add_flag("--config-dump", o.config_dump, "Print the effective configuration as JSON");

  std::optional<std::size_t> max_images;
  std::optional<std::uint64_t> gs_seed;

  auto* eval_traj = app.add_subcommand("eval-traj", "Pose metrics of one predicted trajectory");
  eval_traj->add_option("--gt", o.gt, "Ground-truth TUM trajectory")->required();
  eval_traj->add_option("--pred", o.pred, "Predicted TUM trajectory")->required();
  eval_traj->add_option("--max-images", max_images, "Subsample to at most this many poses");

  auto* eval_dataset = app.add_subcommand("eval-dataset", "Pose metrics over a directory of scene manifests");
  eval_dataset->add_option("--manifest-dir", o.manifest_dir, "Directory of manifests")->required();
  eval_dataset->add_option("--csv", o.csv, "Per-scene CSV output (default <manifest-dir>/summary.csv)");
  eval_dataset->add_option("--jobs", o.jobs, "Scenes evaluated in parallel")->check(CLI::PositiveNumber);
  eval_dataset->add_option("--max-images", max_images, "Subsample to at most this many poses");

  auto* extract = app.add_subcommand("extract-mesh", "Point cloud + trajectory -> collision mesh");
  extract->add_option("--cloud", o.cloud, "Point cloud PLY")->required();
  extract->add_option("--traj", o.traj, "Camera trajectory TUM")->required();
  extract->add_option("-o,--output", o.out, "Output mesh (.obj or .ply)")->required();

  auto* bake = app.add_subcommand("bake-navmesh", "Mesh -> walkable navmesh JSON");
  bake->add_option("--mesh", o.mesh, "Collision mesh (.obj or .ply)")->required();
  bake->add_option("-o,--output", o.out, "Output navmesh JSON")->required();

  auto* plan = app.add_subcommand("plan", "Shortest path between two points on a navmesh");
  plan->add_option("--navmesh", o.navmesh, "Navmesh JSON")->required();
  plan->add_option("--start", o.start, "x,y,z")->required();
  plan->add_option("--goal", o.goal, "x,y,z")->required();
  plan->add_option("-o,--output", o.out, "Output path JSON")->required();

  auto* init = app.add_subcommand("init-gaussians", "Point cloud -> initial Gaussians");
  init->add_option("--cloud", o.cloud, "Point cloud PLY")->required();
  init->add_option("-o,--output", o.out, "Output Gaussian PLY")->required();
  init->add_option("--seed", gs_seed, "Downsampling seed");

  auto* render = app.add_subcommand("render-depth", "Gaussians + trajectory -> depth maps");
  render->add_option("--gaussians", o.gaussians, "Gaussian PLY")->required();
  render->add_option("--traj", o.traj, "Camera trajectory TUM")->required();
  render->add_option("--intrinsics", o.intrinsics, "JSON with fx, fy, cx, cy, width, height")
      ->required();
  render->add_option("-o,--output", o.out, "Output directory")->required();

  auto* run = app.add_subcommand("run-episodes", "Closed-loop navigation episodes");
  run->add_option("--manifest", o.manifest, "Scene manifest with navmesh and gt_trajectory")
      ->required();
  run->add_option("--policy", o.policy, "builtin:expert, builtin:random or exec:<command>")->required();
  run->add_option("--episodes", o.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  run->add_option("--seed", o.seed, "Endpoint sampling seed");
  run->add_option("-o,--output", o.out, "Output JSONL")->required();

  auto* eval_nav = app.add_subcommand("eval-nav", "NE/SR/SPL/IR of an episode log");
  eval_nav->add_option("--episodes", o.episodes_path, "Episode JSONL")->required();

  auto* eval_nvs = app.add_subcommand("eval-nvs", "PSNR/SSIM of rendered views against ground truth");
  eval_nvs->add_option("--pred-dir", o.pred_dir, "Predicted images")->required();
  eval_nvs->add_option("--gt-dir", o.gt_dir, "Ground-truth images")->required();

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    PrintError("usage", e.what());
    return kUsage;
  }

  try {
    wk::Config cfg;
    std::string config_file = o.config_file;
    if (config_file.empty()) {
      if (const char* env = std::getenv("WANDERKIT_CONFIG"); env != nullptr && *env != '\0') config_file = env;
    }
    if (!config_file.empty()) wk::MergeConfigFile(cfg, config_file);
    ApplyOverrides(cfg, o.overrides);
    if (max_images) cfg.max_images = *max_images;
    if (gs_seed) cfg.gs.seed = *gs_seed;
    try {
      cfg.Validate();
    } catch (const wk::Error& e) {
      throw UsageError(std::string("invalid configuration: ") + e.what());
    }

    if (o.version) {
      Emit({{"version", kVersion}, {"config", wk::ConfigToJson(cfg)}});
      return kOk;
    }
    if (o.config_dump) {
      Emit(wk::ConfigToJson(cfg));
      return kOk;
    }
    if (*eval_traj) return EvalTraj(o, cfg);
    if (*eval_dataset) return EvalDataset(o, cfg);
    if (*extract) return ExtractMesh(o, cfg);
    if (*bake) return BakeNavMesh(o, cfg);
    if (*plan) return Plan(o, cfg);
    if (*init) return InitGaussians(o, cfg);
    if (*render) return RenderDepth(o, cfg);
    if (*run) return RunEpisodes(o, cfg);
    if (*eval_nav) return EvalNav(o, cfg);
    if (*eval_nvs) return EvalNvs(o, cfg);
    std::cerr << app.help() << "\n";
    PrintError("usage", "a subcommand is required");
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << app.help() << "\n";
    PrintError("usage", e.what());
    return kUsage;
  } catch (const wk::Error& e) {
    PrintError(std::string(wk::ToString(e.code())), e.what());
    return ExitFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    PrintError("io", e.what());
    return kData;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return kInternal;
  }
}
