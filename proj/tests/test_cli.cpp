#include <gtest/gtest.h>

#include <random>

#include "cli_runner.hpp"
#include "support.hpp"
#include "wanderkit/io.hpp"
#include "wanderkit/manifest.hpp"
#include "wanderkit/serialize.hpp"

using namespace wanderkit;
using namespace wanderkit::testing;

namespace {

Json LastJson(const std::string& text) { return Json::parse(text); }

std::string ErrorKind(const CliResult& r) {
  const auto start = r.err.find('{');
  if (start == std::string::npos) return "";
  return Json::parse(r.err.substr(start))["error"]["kind"];
}

}  // namespace

TEST(Cli, UsageErrorsExit64) {
  EXPECT_EQ(RunCli({}).exit_code, 64);
  const CliResult bogus = RunCli({"--bogus"});
  EXPECT_EQ(bogus.exit_code, 64);
  EXPECT_EQ(ErrorKind(bogus), "usage");
  EXPECT_EQ(RunCli({"eval-traj", "--gt", "a.txt"}).exit_code, 64);
  EXPECT_EQ(RunCli({"--set", "sim.bogus=1", "--config-dump"}).exit_code, 64);
  EXPECT_EQ(RunCli({"--set", "sim.dt=-1", "--config-dump"}).exit_code, 64);
}

TEST(Cli, ConfigPrecedence) {
  TempDir dir;
  WriteTextFile(dir / "cfg.json", R"({"sim": {"max_steps": 200, "dt": 0.2}})");
  const CliResult r = RunCli({"--config", (dir / "cfg.json").string(), "--set", "sim.dt=0.05", "--config-dump"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = LastJson(r.out);
  EXPECT_EQ(j["sim"]["max_steps"], 200);
  EXPECT_EQ(j["sim"]["dt"], 0.05);
  const CliResult env = RunCli({"--config-dump"}, "WANDERKIT_CONFIG=" + ShellQuote((dir / "cfg.json").string()));
  ASSERT_EQ(env.exit_code, 0) << env.err;
  EXPECT_EQ(LastJson(env.out)["sim"]["max_steps"], 200);
}

TEST(Cli, EvalTrajPerfectPrediction) {
  TempDir dir;
  std::mt19937_64 rng(61);
  WriteTum(dir / "gt.txt", RandomTrajectory(rng, 30));
  const CliResult r = RunCli({"eval-traj", "--gt", (dir / "gt.txt").string(), "--pred", (dir / "gt.txt").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = LastJson(r.out);
  EXPECT_LT(j["t_ate_raw"].get<double>(), 1e-12);
  EXPECT_EQ(j["auc_at_30"], 1.0);
  EXPECT_EQ(j["n_poses"], 30);
}

TEST(Cli, EvalTrajErrorsMapToExitCodes) {
  TempDir dir;
  std::mt19937_64 rng(62);
  WriteTum(dir / "gt.txt", RandomTrajectory(rng, 5));
  Trajectory flat;
  for (int i = 0; i < 5; ++i) flat.poses.emplace_back(Quat::Identity(), Vec3::Ones(), double(i));
  WriteTum(dir / "flat.txt", flat);
  WriteTextFile(dir / "broken.txt", "1 2 3\n");

  const CliResult missing = RunCli({"eval-traj", "--gt", (dir / "gt.txt").string(), "--pred", (dir / "nope.txt").string()});
  EXPECT_EQ(missing.exit_code, 65);
  EXPECT_EQ(ErrorKind(missing), "io");
  const CliResult parse = RunCli({"eval-traj", "--gt", (dir / "gt.txt").string(), "--pred", (dir / "broken.txt").string()});
  EXPECT_EQ(parse.exit_code, 65);
  EXPECT_EQ(ErrorKind(parse), "parse");
  const CliResult degenerate = RunCli({"eval-traj", "--gt", (dir / "gt.txt").string(), "--pred", (dir / "flat.txt").string()});
  EXPECT_EQ(degenerate.exit_code, 2);
  EXPECT_EQ(ErrorKind(degenerate), "degenerate_geometry");
}

TEST(Cli, EvalNavFixture) {
  TempDir dir;
  const NavMesh nav = NavMesh::Bake(FlatFloor(10.0, 10));
  const SimConfig sim;
  const SurfacePoint s = nav.Snap(Vec3(1, 5, 0)), g = nav.Snap(Vec3(9, 5, 0));
  const Episode good = RunEpisode(nav, s, g, ExpertPolicy(nav, g.point, sim), sim, RewardConfig{});
  const Episode stuck = RunEpisode(nav, s, g, [](const Observation&) { return Action{}; }, sim, RewardConfig{});
  WriteTextFile(dir / "eps.jsonl", EpisodeToJson(good, "f", sim, {}).dump() + "\n" +
                                       EpisodeToJson(stuck, "f", sim, {}).dump() + "\n");
  const CliResult r = RunCli({"eval-nav", "--episodes", (dir / "eps.jsonl").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = LastJson(r.out);
  EXPECT_EQ(j["sr"], 0.5);
  EXPECT_EQ(j["ir"], 0.5);
  EXPECT_EQ(j["n_episodes"], 2);
}

TEST(Cli, PlanWritesPath) {
  TempDir dir;
  WriteObj(dir / "u.obj", UCorridor());
  const CliResult bake = RunCli({"bake-navmesh", "--mesh", (dir / "u.obj").string(), "-o", (dir / "nav.json").string()});
  ASSERT_EQ(bake.exit_code, 0) << bake.err;
  const CliResult plan = RunCli({"--set", "nav.agent_radius=0", "plan", "--navmesh", (dir / "nav.json").string(),
                                 "--start", "1,9,0", "--goal", "9,9,0", "-o", (dir / "path.json").string()});
  ASSERT_EQ(plan.exit_code, 0) << plan.err;
  EXPECT_NEAR(ReadPathJson(dir / "path.json").length, 2.0 * std::sqrt(50.0) + 6.0, 1e-9);
  const CliResult far = RunCli({"plan", "--navmesh", (dir / "nav.json").string(), "--start", "1,9,50",
                                "--goal", "9,9,0", "-o", (dir / "p2.json").string()});
  EXPECT_EQ(far.exit_code, 65);
  EXPECT_EQ(ErrorKind(far), "invalid_endpoint");
}

TEST(Cli, EvalNvsMatchesByName) {
  TempDir dir;
  fs::create_directories(dir / "pred");
  fs::create_directories(dir / "gt");
  Image a(16, 16, 3, 0.5), b(16, 16, 3, 0.6);
  WritePng(dir / "gt" / "000.png", a);
  WritePng(dir / "pred" / "000.png", a);
  WritePng(dir / "gt" / "001.png", a);
  WritePng(dir / "pred" / "001.png", b);
  const CliResult r = RunCli({"eval-nvs", "--pred-dir", (dir / "pred").string(), "--gt-dir", (dir / "gt").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("psnr"), std::string::npos);
  fs::remove(dir / "pred" / "001.png");
  const CliResult missing = RunCli({"eval-nvs", "--pred-dir", (dir / "pred").string(), "--gt-dir", (dir / "gt").string()});
  EXPECT_NE(missing.exit_code, 0);
  EXPECT_NE(missing.err.find("001.png"), std::string::npos) << missing.err;
}

TEST(Cli, ExternalPolicyEpisodes) {
  TempDir dir;
  WriteObj(dir / "floor.obj", FlatFloor(10.0, 10));
  ASSERT_EQ(RunCli({"bake-navmesh", "--mesh", (dir / "floor.obj").string(), "-o", (dir / "nav.json").string()}).exit_code, 0);
  Trajectory cams;
  for (int i = 0; i < 8; ++i) cams.poses.emplace_back(Quat::Identity(), Vec3(1 + i, 1 + i, 1.5), double(i));
  WriteTum(dir / "cams.txt", cams);
  SceneManifest m;
  m.scene_id = "floor";
  m.navmesh = dir / "nav.json";
  m.gt_trajectory = dir / "cams.txt";
  SaveManifest(dir / "manifest.json", m);

  const CliResult ok = RunCli({"run-episodes", "--manifest", (dir / "manifest.json").string(), "--policy",
                               std::string("exec:") + FAKE_POLICY_PATH + " forward", "--episodes", "3",
                               "-o", (dir / "eps.jsonl").string()});
  ASSERT_EQ(ok.exit_code, 0) << ok.err;
  EXPECT_EQ(ReadEpisodesJsonl(dir / "eps.jsonl").size(), 3u);

  const CliResult crash = RunCli({"run-episodes", "--manifest", (dir / "manifest.json").string(), "--policy",
                                  std::string("exec:") + FAKE_POLICY_PATH + " crash", "--episodes", "2",
                                  "-o", (dir / "bad.jsonl").string()});
  EXPECT_EQ(crash.exit_code, 0) << crash.err;
  const auto eps = ReadEpisodesJsonl(dir / "bad.jsonl");
  ASSERT_EQ(eps.size(), 2u);
  EXPECT_EQ(eps[0].termination, Termination::kHarnessError);
  // Every episode excluded: the metric is undefined.
  EXPECT_EQ(RunCli({"eval-nav", "--episodes", (dir / "bad.jsonl").string()}).exit_code, 2);

  EXPECT_EQ(RunCli({"run-episodes", "--manifest", (dir / "manifest.json").string(), "--policy", "magic",
                    "-o", (dir / "x.jsonl").string()}).exit_code, 64);
}
