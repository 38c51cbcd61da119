#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wanderkit/navmesh.hpp"

namespace wanderkit {

struct AgentState {
  Vec3 position = Vec3::Zero();
  double heading = 0.0;  // radians, measured in the navmesh plane
  int step_index = 0;
};

struct Action {
  double forward_velocity = 0.0;  // m/s
  double yaw_rate = 0.0;          // rad/s
  double dt = 0.0;                // s; filled in by the harness
};

struct SimConfig {
  double success_radius = 1.0;
  int stuck_window = 50;
  double stuck_delta = 0.05;
  double v_max = 1.5;
  double w_max = 1.5;
  double dt = 0.1;
  int max_steps = 1000;
  // Also the largest height change a single move may snap across.
  PathOptions path;

  void Validate() const;
};

struct RewardConfig {
  double r_succ = 10.0;
  double r_fail = 5.0;
  double alpha = 0.01;
  double beta = 1.0;
  double gamma = 0.99;

  void Validate() const;
};

enum class StepStatus { kMoved, kBlocked, kOutOfBounds };

struct StepResult {
  AgentState state;
  StepStatus status = StepStatus::kMoved;
};

// Clamps the action, turns, then moves along the new heading. The tentative
// position is projected onto the navmesh along `up`; a move without a
// surface under it (or onto another region) is blocked and the position
// stays put. Leaving the navmesh's planar footprint reports out-of-bounds.
StepResult Step(const AgentState& state, const Action& action, const NavMesh& navmesh,
                const SimConfig& config);

Action ClampAction(const Action& action, const SimConfig& config);

enum class Termination { kSuccess, kTimeout, kStuck, kOutOfBounds, kHarnessError };

const char* ToString(Termination t);
Termination TerminationFromString(const std::string& s);

enum class StepOutcome { kSuccess, kFailure, kContinue };

double Reward(double prev_distance, double new_distance, StepOutcome outcome,
              const RewardConfig& config);

struct Observation {
  int step_index = 0;
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
  Vec3 goal_vector = Vec3::Zero();  // goal - position
  double geodesic_distance = 0.0;
};

using Policy = std::function<Action(const Observation&)>;

struct Episode {
  std::vector<AgentState> states;
  std::vector<Action> actions;
  std::vector<double> rewards;
  std::vector<double> goal_distances;  // geodesic, one per state
  Termination termination = Termination::kTimeout;
  std::string harness_error;
  Vec3 start = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  double optimal_length = 0.0;
  double actual_length = 0.0;
  std::uint64_t seed = 0;

  double FinalDistance() const { return (states.back().position - goal).norm(); }
  bool success() const { return termination == Termination::kSuccess; }
};

Episode RunEpisode(const NavMesh& navmesh, const SurfacePoint& start, const SurfacePoint& goal,
                   const Policy& policy, const SimConfig& sim, const RewardConfig& reward);

struct NavReport {
  double ne = 0.0;
  double sr = 0.0;
  double spl = 0.0;
  double ir = 0.0;
  std::size_t n_episodes = 0;
  std::size_t n_excluded = 0;  // harness errors
};

// Harness-error episodes are excluded; throws if nothing remains.
NavReport Evaluate(const std::vector<Episode>& episodes);

// Follows a shortest path planned on the first observation: turns in place
// until the next waypoint can be faced within one step, then drives to it.
class ExpertPolicy {
 public:
  ExpertPolicy(const NavMesh& navmesh, const Vec3& goal, const SimConfig& config);
  Action operator()(const Observation& obs);

 private:
  const NavMesh* navmesh_;
  Vec3 goal_;
  SimConfig config_;
  std::vector<Vec3> waypoints_;
  std::size_t next_ = 0;
  bool planned_ = false;
};

class RandomPolicy {
 public:
  RandomPolicy(std::uint64_t seed, const SimConfig& config);
  Action operator()(const Observation& obs);

 private:
  std::mt19937_64 rng_;
  SimConfig config_;
};

// Bridges a policy running in a child process. Each observation is written
// as one JSON line to the child's stdin; one JSON action line is read back
// from its stdout. Failures throw kHarness.
class ProcessPolicy {
 public:
  explicit ProcessPolicy(std::vector<std::string> argv);
  ~ProcessPolicy();
  ProcessPolicy(const ProcessPolicy&) = delete;
  ProcessPolicy& operator=(const ProcessPolicy&) = delete;

  Action operator()(const Observation& obs);

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

std::string ObservationToJson(const Observation& obs);
Action ActionFromJson(const std::string& line);

// Builds a fresh policy for episode `index` of a run.
using PolicyFactory = std::function<Policy(std::size_t index, const Vec3& goal)>;

// Samples endpoints (seed + index per episode) and runs `count` episodes in
// order. Endpoint sampling failures propagate.
std::vector<Episode> RunEpisodes(const NavMesh& navmesh, const Trajectory& cameras,
                                 std::size_t count, std::uint64_t seed,
                                 const PolicyFactory& make_policy, const SimConfig& sim,
                                 const RewardConfig& reward, const EndpointSampling& sampling);

}  // namespace wanderkit
