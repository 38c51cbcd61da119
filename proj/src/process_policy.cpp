#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

#include "wanderkit/error.hpp"
#include "wanderkit/nav_sim.hpp"

namespace wanderkit {
namespace {

[[noreturn]] void HarnessFail(const std::string& msg) { Fail(ErrorCode::kHarness, msg); }

nlohmann::json Vec3Json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string ObservationToJson(const Observation& obs) {
  nlohmann::json j;
  j["step"] = obs.step_index;
  j["position"] = Vec3Json(obs.position);
  j["heading"] = obs.heading;
  j["goal_vector"] = Vec3Json(obs.goal_vector);
  j["geodesic_distance"] = obs.geodesic_distance;
  return j.dump();
}

Action ActionFromJson(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    HarnessFail("policy sent malformed JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("forward_velocity") || !j.contains("yaw_rate") ||
      !j["forward_velocity"].is_number() || !j["yaw_rate"].is_number()) {
    HarnessFail("policy action needs numeric forward_velocity and yaw_rate: " + line);
  }
  Action a;
  a.forward_velocity = j["forward_velocity"].get<double>();
  a.yaw_rate = j["yaw_rate"].get<double>();
  return a;
}

ProcessPolicy::ProcessPolicy(std::vector<std::string> argv) {
  if (argv.empty()) HarnessFail("policy command is empty");
  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) HarnessFail(std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    HarnessFail(std::strerror(errno));
  }
  std::vector<char*> args;
  for (auto& a : argv) args.push_back(a.data());
  args.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) HarnessFail(std::string("fork failed: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

ProcessPolicy::~ProcessPolicy() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    // Closing stdin is the shutdown signal; do not wait forever on a child
    // that ignores it.
    for (int i = 0; i < 100; ++i) {
      if (waitpid(pid_, &status, WNOHANG) != 0) return;
      usleep(10000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
}

Action ProcessPolicy::operator()(const Observation& obs) {
  const std::string line = ObservationToJson(obs) + "\n";
  std::size_t written = 0;
  // A dead child would otherwise raise SIGPIPE.
  struct sigaction ignore {}, previous {};
  ignore.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &ignore, &previous);
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      sigaction(SIGPIPE, &previous, nullptr);
      HarnessFail("policy process closed its input");
    }
    written += static_cast<std::size_t>(n);
  }
  sigaction(SIGPIPE, &previous, nullptr);

  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      const std::string reply = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return ActionFromJson(reply);
    }
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) HarnessFail("policy process exited without answering");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace wanderkit
