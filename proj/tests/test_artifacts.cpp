#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "wanderkit/config.hpp"
#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"
#include "wanderkit/manifest.hpp"
#include "wanderkit/serialize.hpp"

using namespace wanderkit;
using namespace wanderkit::testing;

namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(JsonNumbers, NonFiniteEncoding) {
  EXPECT_TRUE(JsonNumber(std::nan("")).is_null());
  EXPECT_EQ(JsonNumber(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(JsonNumber(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(JsonNumber(1.25), 1.25);
  for (double v : {0.0, -3.5, 1e300, std::numeric_limits<double>::infinity()}) {
    EXPECT_EQ(NumberFromJson(JsonNumber(v)), v);
  }
  EXPECT_TRUE(std::isnan(NumberFromJson(Json())));
}

TEST(Reports, PoseReportJsonRoundTrip) {
  PoseMetricReport r;
  r.t_ate_raw = 0.1;
  r.t_ate_scaled = 0.05;
  r.r_ate = 2.5;
  r.t_rte = 0.3;
  r.t_rte_deg = 4.0;
  r.r_rte = 1.5;
  r.auc_at_30 = 0.75;
  r.n_poses = 12;
  r.degenerate_pairs_skipped = 2;
  r.alignment_rank_deficient = true;
  const PoseMetricReport back = PoseMetricReportFromJson(ToJson(r));
  EXPECT_EQ(back.t_ate_raw, r.t_ate_raw);
  EXPECT_EQ(back.auc_at_30, r.auc_at_30);
  EXPECT_EQ(back.n_poses, 12u);
  EXPECT_EQ(back.degenerate_pairs_skipped, 2u);
  EXPECT_TRUE(back.alignment_rank_deficient);
}

TEST(Reports, CsvHasHeaderAndEmptyCellsForFailures) {
  SceneReportRow ok{"scene_a", "slam", {}};
  ok.report.n_poses = 10;
  ok.report.auc_at_30 = 0.5;
  SceneReportRow failed{"scene_b", "slam", {}};
  const std::string csv = SummaryCsv({ok, failed});
  const auto first_nl = csv.find('\n');
  const std::string header = csv.substr(0, first_nl);
  EXPECT_EQ(header.rfind("scene_id,method,n_poses", 0), 0u) << header;
  EXPECT_NE(header.find("auc_at_30"), std::string::npos);
  EXPECT_NE(csv.find("scene_a,slam,10,"), std::string::npos);
  EXPECT_NE(csv.find("scene_b,slam,0,,"), std::string::npos) << csv;
}

TEST(NavMeshJson, RoundTripKeepsTopology) {
  TempDir dir;
  const TriangleMesh mesh = Concat(UCorridor(), Strip(4, 40.0));
  WriteObj(dir / "mesh.obj", mesh);
  const NavMesh nav = NavMesh::Bake(mesh);
  WriteNavMeshJson(dir / "nav.json", nav, "mesh.obj");
  const NavMesh back = ReadNavMeshJson(dir / "nav.json");
  EXPECT_EQ(back.source_faces(), nav.source_faces());
  EXPECT_EQ(back.triangles(), nav.triangles());
  EXPECT_EQ(back.vertices(), nav.vertices());
  EXPECT_EQ(back.num_regions(), nav.num_regions());
  EXPECT_EQ(GeodesicDistance(back, Vec3(1, 9, 0), Vec3(9, 9, 0)),
            GeodesicDistance(nav, Vec3(1, 9, 0), Vec3(9, 9, 0)));

  // A navmesh that no longer matches its mesh is rejected.
  WriteObj(dir / "mesh.obj", Strip(4, 0.0));
  EXPECT_EQ(CodeOf([&] { ReadNavMeshJson(dir / "nav.json"); }), ErrorCode::kParse);
}

TEST(PathJson, RoundTrip) {
  TempDir dir;
  Path p;
  p.waypoints = {Vec3(0, 0, 0), Vec3(1.0 / 3.0, 2, 0), Vec3(5, 5, 0.1)};
  p.length = 42.0 / 7.0;
  WritePathJson(dir / "p.json", p);
  const Path back = ReadPathJson(dir / "p.json");
  EXPECT_EQ(back.waypoints, p.waypoints);
  EXPECT_EQ(back.length, p.length);
}

TEST(EpisodeJson, RoundTrip) {
  TempDir dir;
  const NavMesh nav = NavMesh::Bake(FlatFloor(10.0, 10));
  const SimConfig sim;
  const SurfacePoint s = nav.Snap(Vec3(1, 1, 0)), g = nav.Snap(Vec3(8, 3, 0));
  Episode ep = RunEpisode(nav, s, g, ExpertPolicy(nav, g.point, sim), sim, RewardConfig{});
  ep.seed = 99;
  std::string jsonl = EpisodeToJson(ep, "room", sim, RewardConfig{}).dump() + "\n";
  jsonl += EpisodeToJson(ep, "room", sim, RewardConfig{}).dump() + "\n";
  WriteTextFile(dir / "e.jsonl", jsonl);
  const auto back = ReadEpisodesJsonl(dir / "e.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].termination, ep.termination);
  EXPECT_EQ(back[0].optimal_length, ep.optimal_length);
  EXPECT_EQ(back[0].actual_length, ep.actual_length);
  EXPECT_EQ(back[0].rewards, ep.rewards);
  EXPECT_EQ(back[0].seed, 99u);
  EXPECT_EQ(back[0].states.back().position, ep.states.back().position);
  EXPECT_EQ(back[0].goal, ep.goal);
  const NavReport a = Evaluate({ep, ep}), b = Evaluate(back);
  EXPECT_EQ(a.spl, b.spl);
  EXPECT_EQ(a.ne, b.ne);

  WriteTextFile(dir / "bad.jsonl", "{\"termination\": \"success\"}\n");
  EXPECT_EQ(CodeOf([&] { ReadEpisodesJsonl(dir / "bad.jsonl"); }), ErrorCode::kParse);
}

TEST(Manifest, LoadResolvesAndSaveRelativizes) {
  TempDir dir;
  fs::create_directories(dir / "scene" / "data");
  WriteTextFile(dir / "scene" / "data" / "gt.txt", "1 0 0 0 0 0 0 1\n");
  WriteTextFile(dir / "scene" / "data" / "slam.txt", "1 0 0 0 0 0 0 1\n");
  WriteTextFile(dir / "scene" / "manifest.json", R"({
    "format_version": 1, "scene_id": "s1", "units": "meters", "split": "extrapolation",
    "paths": {"gt_trajectory": "data/gt.txt",
              "predicted_trajectories": {"slam": "data/slam.txt"}}})");
  const SceneManifest m = LoadManifest(dir / "scene" / "manifest.json");
  EXPECT_EQ(m.scene_id, "s1");
  EXPECT_EQ(m.split, "extrapolation");
  ASSERT_TRUE(m.gt_trajectory);
  EXPECT_TRUE(fs::exists(*m.gt_trajectory));
  EXPECT_EQ(m.predicted_trajectories.at("slam"), m.gt_trajectory->parent_path() / "slam.txt");

  SaveManifest(dir / "scene" / "copy.json", m);
  const Json doc = Json::parse(ReadTextFile(dir / "scene" / "copy.json"));
  EXPECT_EQ(doc["paths"]["gt_trajectory"], "data/gt.txt");
  const SceneManifest again = LoadManifest(dir / "scene" / "copy.json");
  EXPECT_EQ(again.gt_trajectory, m.gt_trajectory);
}

TEST(Manifest, Errors) {
  TempDir dir;
  auto load = [&](const std::string& text) {
    WriteTextFile(dir / "m.json", text);
    return CodeOf([&] { LoadManifest(dir / "m.json"); });
  };
  EXPECT_EQ(load("{"), ErrorCode::kParse);
  EXPECT_EQ(load(R"({"format_version": 2, "scene_id": "a", "split": "train"})"), ErrorCode::kParse);
  EXPECT_EQ(load(R"({"format_version": 1, "scene_id": "a", "split": "test"})"), ErrorCode::kParse);
  EXPECT_EQ(load(R"({"format_version": 1, "scene_id": "a", "split": "train", "units": "feet"})"),
            ErrorCode::kParse);
  EXPECT_EQ(load(R"({"format_version": 1, "scene_id": "a", "split": "train", "colour": 1})"),
            ErrorCode::kParse);
  EXPECT_EQ(load(R"({"format_version": 1, "scene_id": "a", "split": "train",
                     "paths": {"mesh": "nope.obj", "navmesh": "nope.json"}})"),
            ErrorCode::kIo);
  try {
    LoadManifest(dir / "m.json");
  } catch (const Error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("nope.obj"), std::string::npos);
    EXPECT_NE(what.find("nope.json"), std::string::npos);
  }
}

TEST(Config, DefaultsRoundTripThroughJson) {
  const Config defaults;
  EXPECT_NO_THROW(defaults.Validate());
  Config c;
  MergeConfig(c, ConfigToJson(defaults));
  EXPECT_EQ(ConfigToJson(c), ConfigToJson(defaults));
  const Json j = ConfigToJson(defaults);
  EXPECT_EQ(j["sim"]["max_steps"], 1000);
  EXPECT_EQ(j["recon"]["min_faces"], 50);
  EXPECT_EQ(j["gs"]["max_opacity"], 0.99);
  EXPECT_EQ(j["traj_eval"]["max_images"], 500);
}

TEST(Config, MergeOverridesAndRejectsUnknown) {
  Config c;
  MergeConfig(c, Json::parse(R"({"sim": {"success_radius": 0.5}, "recon": {"box_smooth": true}})"));
  EXPECT_EQ(c.sim.success_radius, 0.5);
  EXPECT_TRUE(c.recon.marching_cubes.box_smooth);
  EXPECT_EQ(c.sim.max_steps, 1000);
  EXPECT_EQ(CodeOf([&] { MergeConfig(c, Json::parse(R"({"sim": {"speed": 1}})")); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { MergeConfig(c, Json::parse(R"({"physics": {}})")); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { MergeConfig(c, Json::parse(R"({"sim": {"max_steps": 1.5}})")); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { MergeConfig(c, Json::parse(R"({"sim": {"max_steps": "ten"}})")); }),
            ErrorCode::kParse);
  Config bad;
  bad.sim.dt = 0.0;
  EXPECT_THROW(bad.Validate(), Error);
}
