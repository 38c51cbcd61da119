#include "wanderkit/nav_sim.hpp"

#include <algorithm>
#include <cmath>

#include "wanderkit/error.hpp"

namespace wanderkit {
namespace {

double WrapAngle(double a) { return std::remainder(a, 2.0 * kPi); }

double SafeGeodesic(const NavMesh& navmesh, const Vec3& from, const Vec3& to,
                    const PathOptions& options, bool& ok) {
  try {
    ok = true;
    return GeodesicDistance(navmesh, from, to, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnreachable && e.code() != ErrorCode::kInvalidEndpoint) throw;
    ok = false;
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

void SimConfig::Validate() const {
  Require(success_radius >= 0.0, "success_radius must be non-negative");
  Require(stuck_window >= 1, "stuck_window must be at least 1");
  Require(stuck_delta >= 0.0, "stuck_delta must be non-negative");
  Require(v_max > 0.0 && w_max > 0.0, "v_max and w_max must be positive");
  Require(dt > 0.0, "dt must be positive");
  Require(max_steps >= 1, "max_steps must be at least 1");
  Require(path.snap_cap > 0.0 && path.agent_radius >= 0.0, "invalid path options");
}

void RewardConfig::Validate() const {
  Require(r_succ > 0.0 && r_fail > 0.0, "r_succ and r_fail must be positive");
  Require(alpha > 0.0 && beta > 0.0, "alpha and beta must be positive");
  Require(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
}

Action ClampAction(const Action& action, const SimConfig& config) {
  Action out;
  out.forward_velocity = std::isfinite(action.forward_velocity)
                             ? std::clamp(action.forward_velocity, 0.0, config.v_max)
                             : 0.0;
  out.yaw_rate =
      std::isfinite(action.yaw_rate) ? std::clamp(action.yaw_rate, -config.w_max, config.w_max) : 0.0;
  out.dt = config.dt;
  return out;
}

StepResult Step(const AgentState& state, const Action& action, const NavMesh& navmesh,
                const SimConfig& config) {
  const Action a = ClampAction(action, config);
  StepResult result;
  result.state = state;
  result.state.step_index = state.step_index + 1;
  result.state.heading = WrapAngle(state.heading + a.yaw_rate * a.dt);
  const double distance = a.forward_velocity * a.dt;
  if (distance == 0.0) return result;

  const Vec3 tentative = state.position + distance * navmesh.PlanarDirection(result.state.heading);
  if (!navmesh.InsidePlanarBounds(navmesh.Planar(tentative))) {
    result.status = StepStatus::kOutOfBounds;
    return result;
  }
  const auto landed = navmesh.ProjectAlongUp(tentative, config.path.snap_cap);
  const std::uint32_t region = navmesh.region(navmesh.Snap(state.position).triangle);
  if (!landed || navmesh.region(landed->triangle) != region) {
    result.status = StepStatus::kBlocked;
    return result;
  }
  result.state.position = landed->point;
  return result;
}

const char* ToString(Termination t) {
  switch (t) {
    case Termination::kSuccess: return "success";
    case Termination::kTimeout: return "timeout";
    case Termination::kStuck: return "stuck";
    case Termination::kOutOfBounds: return "out_of_bounds";
    case Termination::kHarnessError: return "harness_error";
  }
  return "unknown";
}

Termination TerminationFromString(const std::string& s) {
  for (Termination t : {Termination::kSuccess, Termination::kTimeout, Termination::kStuck,
                        Termination::kOutOfBounds, Termination::kHarnessError}) {
    if (s == ToString(t)) return t;
  }
  Fail(ErrorCode::kParse, "unknown termination '" + s + "'");
}

double Reward(double prev_distance, double new_distance, StepOutcome outcome,
              const RewardConfig& config) {
  switch (outcome) {
    case StepOutcome::kSuccess: return config.r_succ;
    case StepOutcome::kFailure: return -config.r_fail;
    case StepOutcome::kContinue: break;
  }
  return -config.alpha + config.beta * (prev_distance - new_distance);
}

Episode RunEpisode(const NavMesh& navmesh, const SurfacePoint& start, const SurfacePoint& goal,
                   const Policy& policy, const SimConfig& sim, const RewardConfig& reward) {
  sim.Validate();
  reward.Validate();
  Episode ep;
  ep.start = start.point;
  ep.goal = goal.point;
  AgentState state;
  state.position = start.point;
  ep.states.push_back(state);
  ep.optimal_length = GeodesicDistance(navmesh, start.point, goal.point, sim.path);
  ep.goal_distances.push_back(ep.optimal_length);

  if (ep.optimal_length <= sim.success_radius) {
    ep.termination = Termination::kSuccess;
    return ep;
  }

  while (true) {
    Observation obs;
    obs.step_index = state.step_index;
    obs.position = state.position;
    obs.heading = state.heading;
    obs.goal_vector = goal.point - state.position;
    obs.geodesic_distance = ep.goal_distances.back();

    Action action;
    try {
      action = policy(obs);
    } catch (const std::exception& e) {
      ep.termination = Termination::kHarnessError;
      ep.harness_error = e.what();
      break;
    }
    action = ClampAction(action, sim);
    const StepResult stepped = Step(state, action, navmesh, sim);
    state = stepped.state;

    const double prev_d = ep.goal_distances.back();
    double new_d = prev_d;
    bool in_bounds = stepped.status != StepStatus::kOutOfBounds;
    if (in_bounds) {
      bool ok = true;
      new_d = SafeGeodesic(navmesh, state.position, goal.point, sim.path, ok);
      if (!ok) {
        in_bounds = false;
        new_d = prev_d;
      }
    }

    StepOutcome outcome = StepOutcome::kContinue;
    std::optional<Termination> done;
    const auto n = static_cast<int>(ep.states.size());
    if (!in_bounds) {
      done = Termination::kOutOfBounds;
      outcome = StepOutcome::kFailure;
    } else if (new_d <= sim.success_radius) {
      done = Termination::kSuccess;
      outcome = StepOutcome::kSuccess;
    } else if (state.step_index >= sim.stuck_window &&
               (state.position - ep.states[n - sim.stuck_window].position).norm() <
                   sim.stuck_delta) {
      done = Termination::kStuck;
      outcome = StepOutcome::kFailure;
    } else if (state.step_index >= sim.max_steps) {
      done = Termination::kTimeout;
    }

    ep.actions.push_back(action);
    ep.rewards.push_back(Reward(prev_d, new_d, outcome, reward));
    ep.states.push_back(state);
    ep.goal_distances.push_back(new_d);
    if (done) {
      ep.termination = *done;
      break;
    }
  }
  for (std::size_t i = 1; i < ep.states.size(); ++i) {
    ep.actual_length += (ep.states[i].position - ep.states[i - 1].position).norm();
  }
  return ep;
}

NavReport Evaluate(const std::vector<Episode>& episodes) {
  NavReport report;
  double ne = 0.0, sr = 0.0, spl = 0.0, ir = 0.0;
  for (const Episode& ep : episodes) {
    if (ep.termination == Termination::kHarnessError) {
      ++report.n_excluded;
      continue;
    }
    ++report.n_episodes;
    ne += ep.FinalDistance();
    if (ep.success()) {
      sr += 1.0;
      const double denom = std::max(ep.actual_length, ep.optimal_length);
      spl += denom > 0.0 ? ep.optimal_length / denom : 1.0;
    }
    if (ep.termination == Termination::kStuck || ep.termination == Termination::kOutOfBounds) {
      ir += 1.0;
    }
  }
  if (report.n_episodes == 0) {
    Fail(ErrorCode::kUndefinedMetric, "no evaluable episodes");
  }
  const auto n = static_cast<double>(report.n_episodes);
  report.ne = ne / n;
  report.sr = sr / n;
  report.spl = spl / n;
  report.ir = ir / n;
  return report;
}

ExpertPolicy::ExpertPolicy(const NavMesh& navmesh, const Vec3& goal, const SimConfig& config)
    : navmesh_(&navmesh), goal_(goal), config_(config) {}

Action ExpertPolicy::operator()(const Observation& obs) {
  if (!planned_) {
    waypoints_ = ShortestPath(*navmesh_, obs.position, goal_, config_.path).waypoints;
    next_ = 1;
    planned_ = true;
  }
  const Vec2 here = navmesh_->Planar(obs.position);
  while (next_ < waypoints_.size() && (navmesh_->Planar(waypoints_[next_]) - here).norm() < 1e-9) {
    ++next_;
  }
  Action action;
  if (next_ >= waypoints_.size()) return action;

  const Vec2 delta = navmesh_->Planar(waypoints_[next_]) - here;
  const double err = WrapAngle(std::atan2(delta.y(), delta.x()) - obs.heading);
  const double max_turn = config_.w_max * config_.dt;
  if (std::abs(err) > max_turn) {
    action.yaw_rate = std::copysign(config_.w_max, err);
    return action;
  }
  action.yaw_rate = err / config_.dt;
  action.forward_velocity = std::min(config_.v_max, delta.norm() / config_.dt);
  return action;
}

RandomPolicy::RandomPolicy(std::uint64_t seed, const SimConfig& config)
    : rng_(seed), config_(config) {}

Action RandomPolicy::operator()(const Observation&) {
  std::uniform_real_distribution<double> v(0.0, config_.v_max);
  std::uniform_real_distribution<double> w(-config_.w_max, config_.w_max);
  Action action;
  action.forward_velocity = v(rng_);
  action.yaw_rate = w(rng_);
  return action;
}

std::vector<Episode> RunEpisodes(const NavMesh& navmesh, const Trajectory& cameras,
                                 std::size_t count, std::uint64_t seed,
                                 const PolicyFactory& make_policy, const SimConfig& sim,
                                 const RewardConfig& reward, const EndpointSampling& sampling) {
  std::vector<Episode> episodes;
  episodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t episode_seed = seed + i;
    const auto [start, goal] = SampleEndpoints(navmesh, cameras, sampling, episode_seed, sim.path);
    Episode ep = RunEpisode(navmesh, start, goal, make_policy(i, goal.point), sim, reward);
    ep.seed = episode_seed;
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

}  // namespace wanderkit
