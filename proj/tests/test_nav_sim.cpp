#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "support.hpp"
#include "wanderkit/error.hpp"
#include "wanderkit/nav_sim.hpp"

using namespace wanderkit;
using namespace wanderkit::testing;

namespace {

const NavMesh& Floor() {
  static const NavMesh nav = NavMesh::Bake(FlatFloor(10.0, 10));
  return nav;
}

const NavMesh& Corridor() {
  static const NavMesh nav = NavMesh::Bake(UCorridor());
  return nav;
}

SurfacePoint At(const NavMesh& nav, double x, double y) { return nav.Snap(Vec3(x, y, 0)); }

Policy Constant(double v, double w) {
  return [v, w](const Observation&) {
    Action a;
    a.forward_velocity = v;
    a.yaw_rate = w;
    return a;
  };
}

Episode Made(Termination t, double optimal, double actual, double final_gap) {
  Episode ep;
  ep.goal = Vec3(0, 0, 0);
  AgentState s;
  s.position = Vec3(final_gap, 0, 0);
  ep.states = {s};
  ep.termination = t;
  ep.optimal_length = optimal;
  ep.actual_length = actual;
  return ep;
}

}  // namespace

TEST(Step, ZeroActionOnlyAdvancesTime) {
  AgentState s;
  s.position = Vec3(5, 5, 0);
  s.heading = 0.3;
  const StepResult r = Step(s, Action{}, Floor(), SimConfig{});
  EXPECT_EQ(r.status, StepStatus::kMoved);
  EXPECT_EQ(r.state.position, s.position);
  EXPECT_EQ(r.state.heading, 0.3);
  EXPECT_EQ(r.state.step_index, 1);
}

TEST(Step, OneMeterForward) {
  SimConfig cfg;
  cfg.dt = 1.0;
  AgentState s;
  s.position = Vec3(2, 5, 0);
  s.heading = kPi / 2;
  Action a;
  a.forward_velocity = 1.0;
  const StepResult r = Step(s, a, Floor(), cfg);
  EXPECT_EQ(r.status, StepStatus::kMoved);
  EXPECT_LT((r.state.position - Vec3(2, 6, 0)).norm(), 1e-12);
}

TEST(Step, TurnsBeforeMovingAndWrapsHeading) {
  SimConfig cfg;
  cfg.dt = 1.0;
  AgentState s;
  s.position = Vec3(5, 5, 0);
  s.heading = kPi - 0.1;
  Action a;
  a.forward_velocity = 1.0;
  a.yaw_rate = 0.3;
  const StepResult r = Step(s, a, Floor(), cfg);
  EXPECT_NEAR(r.state.heading, -kPi + 0.2, 1e-12);
  EXPECT_LT((r.state.position - (Vec3(5, 5, 0) + Vec3(std::cos(kPi + 0.2), std::sin(kPi + 0.2), 0)))
                .norm(),
            1e-12);
}

TEST(Step, ActionsAreClamped) {
  SimConfig cfg;
  Action a;
  a.forward_velocity = 10.0;
  a.yaw_rate = -10.0;
  const Action c = ClampAction(a, cfg);
  EXPECT_EQ(c.forward_velocity, cfg.v_max);
  EXPECT_EQ(c.yaw_rate, -cfg.w_max);
  EXPECT_EQ(c.dt, cfg.dt);
  a.forward_velocity = -1.0;
  a.yaw_rate = std::nan("");
  EXPECT_EQ(ClampAction(a, cfg).forward_velocity, 0.0);
  EXPECT_EQ(ClampAction(a, cfg).yaw_rate, 0.0);
}

TEST(Step, WallBlocksAndKeepsPosition) {
  SimConfig cfg;
  cfg.dt = 1.0;
  AgentState s;
  s.position = Vec3(1.5, 5, 0);
  Action a;
  a.forward_velocity = 1.0;  // toward the empty middle of the U
  const StepResult r = Step(s, a, Corridor(), cfg);
  EXPECT_EQ(r.status, StepStatus::kBlocked);
  EXPECT_EQ(r.state.position, s.position);
  EXPECT_EQ(r.state.step_index, 1);
}

TEST(Step, LeavingFootprintIsOutOfBounds) {
  AgentState s;
  s.position = Vec3(9.95, 5, 0);
  Action a;
  a.forward_velocity = 1.5;
  const StepResult r = Step(s, a, Floor(), SimConfig{});
  EXPECT_EQ(r.status, StepStatus::kOutOfBounds);
  EXPECT_EQ(r.state.position, s.position);
}

TEST(Reward, Cases) {
  RewardConfig rc;
  EXPECT_EQ(Reward(5.0, 4.0, StepOutcome::kSuccess, rc), 10.0);
  EXPECT_EQ(Reward(5.0, 4.0, StepOutcome::kFailure, rc), -5.0);
  EXPECT_NEAR(Reward(5.0, 4.0, StepOutcome::kContinue, rc), -0.01 + 1.0, 1e-15);
  EXPECT_NEAR(Reward(5.0, 5.5, StepOutcome::kContinue, rc), -0.01 - 0.5, 1e-15);
  EXPECT_EQ(Reward(5.0, 5.0, StepOutcome::kContinue, rc), -0.01);
}

TEST(Episode, ZeroActionEndsStuck) {
  const SimConfig cfg;
  const Episode ep = RunEpisode(Floor(), At(Floor(), 1, 5), At(Floor(), 9, 5), Constant(0, 0), cfg,
                                RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kStuck);
  EXPECT_EQ(ep.actions.size(), static_cast<std::size_t>(cfg.stuck_window));
  EXPECT_EQ(ep.rewards.back(), -5.0);
  for (std::size_t i = 0; i + 1 < ep.rewards.size(); ++i) EXPECT_EQ(ep.rewards[i], -0.01);
  EXPECT_EQ(ep.actual_length, 0.0);
}

TEST(Episode, CirclingTimesOut) {
  SimConfig cfg;
  cfg.max_steps = 30;
  const Episode ep = RunEpisode(Floor(), At(Floor(), 3, 5), At(Floor(), 9, 9), Constant(1.0, 1.5),
                                cfg, RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kTimeout);
  EXPECT_EQ(ep.actions.size(), 30u);
  EXPECT_EQ(ep.states.size(), 31u);
  EXPECT_EQ(ep.goal_distances.size(), 31u);
  // Timeout steps are shaped, not penalized.
  double sum = 0.0;
  for (double r : ep.rewards) sum += r;
  EXPECT_NEAR(sum, -0.01 * 30 + (ep.goal_distances.front() - ep.goal_distances.back()), 1e-9);
}

TEST(Episode, MaxStepCapDefaultsToThousand) {
  EXPECT_EQ(SimConfig{}.max_steps, 1000);
  SimConfig cfg;
  cfg.stuck_window = 100000;  // never stuck
  const Episode ep = RunEpisode(Floor(), At(Floor(), 1, 5), At(Floor(), 9, 5), Constant(0, 0), cfg,
                                RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kTimeout);
  EXPECT_EQ(ep.actions.size(), 1000u);
}

TEST(Episode, DrivingIntoTheEdgeIsOutOfBounds) {
  const Episode ep = RunEpisode(Floor(), At(Floor(), 5, 5), At(Floor(), 5, 1), Constant(1.5, 0),
                                SimConfig{}, RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kOutOfBounds);
  EXPECT_EQ(ep.rewards.back(), -5.0);
}

TEST(Episode, StartInsideSuccessRadius) {
  const Episode ep = RunEpisode(Floor(), At(Floor(), 5, 5), At(Floor(), 5.5, 5), Constant(0, 0),
                                SimConfig{}, RewardConfig{});
  EXPECT_TRUE(ep.success());
  EXPECT_TRUE(ep.actions.empty());
  EXPECT_EQ(ep.states.size(), 1u);
}

TEST(Episode, ExpertReachesGoalAroundTheBend) {
  const SimConfig cfg;
  const SurfacePoint start = At(Corridor(), 1, 9), goal = At(Corridor(), 9, 9);
  const Episode ep = RunEpisode(Corridor(), start, goal, ExpertPolicy(Corridor(), goal.point, cfg),
                                cfg, RewardConfig{});
  ASSERT_EQ(ep.termination, Termination::kSuccess);
  EXPECT_LE(ep.goal_distances.back(), cfg.success_radius);
  EXPECT_GT(ep.optimal_length, 20.0);
  EXPECT_EQ(ep.rewards.back(), 10.0);
  const NavReport r = Evaluate({ep});
  EXPECT_EQ(r.sr, 1.0);
  EXPECT_GE(r.spl, 0.95);
  // Shaping over all but the final step telescopes.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < ep.rewards.size(); ++i) sum += ep.rewards[i];
  const std::size_t t = ep.rewards.size() - 1;
  EXPECT_NEAR(sum, -0.01 * t + (ep.goal_distances[0] - ep.goal_distances[t]), 1e-9);
}

TEST(Episode, PolicyExceptionIsHarnessError) {
  const Policy bad = [](const Observation& o) -> Action {
    if (o.step_index == 3) throw std::runtime_error("boom");
    return Action{};
  };
  const Episode ep =
      RunEpisode(Floor(), At(Floor(), 1, 5), At(Floor(), 9, 5), bad, SimConfig{}, RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kHarnessError);
  EXPECT_EQ(ep.harness_error, "boom");
  EXPECT_EQ(ep.actions.size(), 3u);
}

TEST(Evaluate, SplExamples) {
  const NavReport exact = Evaluate({Made(Termination::kSuccess, 10.0, 10.0, 0.5)});
  EXPECT_EQ(exact.spl, 1.0);
  const NavReport detour = Evaluate({Made(Termination::kSuccess, 10.0, 12.5, 0.5)});
  EXPECT_DOUBLE_EQ(detour.spl, 0.8);
  // Cutting the last meter never pushes SPL above one.
  EXPECT_EQ(Evaluate({Made(Termination::kSuccess, 10.0, 9.2, 0.8)}).spl, 1.0);
  EXPECT_EQ(Evaluate({Made(Termination::kTimeout, 10.0, 10.0, 3.0)}).spl, 0.0);
}

TEST(Evaluate, SuccessTimeoutStuck) {
  const NavReport r = Evaluate({Made(Termination::kSuccess, 10.0, 12.5, 0.5),
                                Made(Termination::kTimeout, 8.0, 20.0, 4.0),
                                Made(Termination::kStuck, 6.0, 1.0, 6.0)});
  EXPECT_EQ(r.n_episodes, 3u);
  EXPECT_DOUBLE_EQ(r.sr, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.spl, 0.8 / 3.0);
  EXPECT_DOUBLE_EQ(r.ir, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.ne, (0.5 + 4.0 + 6.0) / 3.0);
  EXPECT_LE(r.spl, r.sr);
}

TEST(Evaluate, HarnessErrorsAreExcluded) {
  const NavReport r = Evaluate({Made(Termination::kSuccess, 1.0, 1.0, 0.0),
                                Made(Termination::kHarnessError, 1.0, 1.0, 9.0)});
  EXPECT_EQ(r.n_episodes, 1u);
  EXPECT_EQ(r.n_excluded, 1u);
  EXPECT_EQ(r.sr, 1.0);
  try {
    Evaluate({Made(Termination::kHarnessError, 1.0, 1.0, 0.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedMetric);
  }
}

TEST(Termination, StringRoundTrip) {
  for (Termination t : {Termination::kSuccess, Termination::kTimeout, Termination::kStuck,
                        Termination::kOutOfBounds, Termination::kHarnessError}) {
    EXPECT_EQ(TerminationFromString(ToString(t)), t);
  }
  EXPECT_THROW(TerminationFromString("lost"), Error);
}

TEST(RunEpisodes, ExpertSetIsPerfectAndDeterministic) {
  Trajectory cams;
  for (int i = 0; i < 10; ++i) {
    cams.poses.emplace_back(Quat::Identity(), Vec3(1, 1 + 0.8 * i, 1.5));
    cams.poses.emplace_back(Quat::Identity(), Vec3(9, 1 + 0.8 * i, 1.5));
  }
  const SimConfig cfg;
  const PolicyFactory expert = [&](std::size_t, const Vec3& goal) {
    return Policy(ExpertPolicy(Corridor(), goal, cfg));
  };
  const auto a = RunEpisodes(Corridor(), cams, 20, 7, expert, cfg, RewardConfig{}, {});
  const auto b = RunEpisodes(Corridor(), cams, 20, 7, expert, cfg, RewardConfig{}, {});
  const NavReport r = Evaluate(a);
  EXPECT_EQ(r.sr, 1.0);
  EXPECT_GE(r.spl, 0.95);
  EXPECT_EQ(r.ir, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, 7 + i);
    EXPECT_EQ(a[i].start, b[i].start);
    EXPECT_EQ(a[i].rewards, b[i].rewards);
  }
}

TEST(RunEpisodes, SplNeverExceedsSr) {
  Trajectory cams;
  for (int i = 0; i < 8; ++i) cams.poses.emplace_back(Quat::Identity(), Vec3(1 + i, 1 + i, 1.5));
  const SimConfig cfg;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PolicyFactory random = [&](std::size_t i, const Vec3&) {
      return Policy(RandomPolicy(seed * 100 + i, cfg));
    };
    const NavReport r = Evaluate(RunEpisodes(Floor(), cams, 10, seed, random, cfg, {}, {}));
    EXPECT_LE(r.spl, r.sr);
    EXPECT_GE(r.spl, 0.0);
  }
}

TEST(Wire, ObservationAndActionJson) {
  Observation o;
  o.step_index = 4;
  o.position = Vec3(1, 2, 3);
  o.heading = 0.5;
  o.goal_vector = Vec3(-1, 0, 0);
  o.geodesic_distance = 7.25;
  const auto j = nlohmann::json::parse(ObservationToJson(o));
  EXPECT_EQ(j["step"], 4);
  EXPECT_EQ(j["position"][2], 3.0);
  EXPECT_EQ(j["geodesic_distance"], 7.25);
  const Action a = ActionFromJson(R"({"forward_velocity": 0.5, "yaw_rate": -0.25})");
  EXPECT_EQ(a.forward_velocity, 0.5);
  EXPECT_EQ(a.yaw_rate, -0.25);
  EXPECT_THROW(ActionFromJson("{}"), Error);
  EXPECT_THROW(ActionFromJson("nope"), Error);
}

TEST(ProcessPolicy, DrivesAnEpisode) {
  ProcessPolicy child({FAKE_POLICY_PATH, "forward"});
  const Policy p = [&](const Observation& o) { return child(o); };
  const Episode ep =
      RunEpisode(Floor(), At(Floor(), 1, 5), At(Floor(), 9, 5), p, SimConfig{}, RewardConfig{});
  EXPECT_EQ(ep.termination, Termination::kSuccess);
}

TEST(ProcessPolicy, SeesObservations) {
  ProcessPolicy child({FAKE_POLICY_PATH, "echo-step"});
  Observation o;
  o.step_index = 2;
  EXPECT_EQ(child(o).forward_velocity, 2.0);
  o.step_index = 5;
  EXPECT_EQ(child(o).forward_velocity, 5.0);
}

TEST(ProcessPolicy, FailuresBecomeHarnessErrors) {
  for (const char* mode : {"crash", "garbage"}) {
    ProcessPolicy child({FAKE_POLICY_PATH, mode});
    try {
      child(Observation{});
      FAIL() << mode;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kHarness) << mode;
    }
  }
  try {
    ProcessPolicy missing({"/nonexistent/policy-binary"});
    missing(Observation{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHarness);
  }
}
