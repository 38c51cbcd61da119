#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

constexpr double kRenormalizeTolerance = 1e-9;

double ParseField(const std::string& tok, int line_no, int field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": field " +
                                std::to_string(field + 1) + " '" + tok + "' is not a number");
  }
  if (!std::isfinite(v)) {
    Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": field " +
                                std::to_string(field + 1) + " is not finite");
  }
  return v;
}

void AppendNumber(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

Trajectory ParseTum(std::istream& in, TumLoadReport* report) {
  TumLoadReport local;
  Trajectory traj;
  std::string line;
  int line_no = 0;
  double latest = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.size() != 8) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                  std::to_string(tok.size()));
    }
    double v[8];
    for (int k = 0; k < 8; ++k) v[k] = ParseField(tok[k], line_no, k);
    Quat q(v[7], v[4], v[5], v[6]);
    const double norm = q.norm();
    if (norm < 1e-12) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": zero quaternion");
    }
    if (std::abs(norm - 1.0) > kRenormalizeTolerance) {
      q.coeffs() /= norm;
      ++local.renormalized;
    }
    if (v[0] < latest) ++local.reordered;
    latest = std::max(latest, v[0]);
    traj.poses.emplace_back(q, Vec3(v[1], v[2], v[3]), v[0]);
  }
  std::stable_sort(traj.poses.begin(), traj.poses.end(),
                   [](const Pose& a, const Pose& b) { return *a.timestamp < *b.timestamp; });
  for (std::size_t i = 1; i < traj.poses.size(); ++i) {
    if (*traj.poses[i].timestamp == *traj.poses[i - 1].timestamp) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "duplicate timestamp " << *traj.poses[i].timestamp;
      Fail(ErrorCode::kParse, msg.str());
    }
  }
  if (report != nullptr) *report = local;
  return traj;
}

Trajectory ReadTum(const fs::path& path, TumLoadReport* report) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ParseTum(in, report);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string FormatTum(const Trajectory& traj) {
  std::string out = "# timestamp tx ty tz qx qy qz qw\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Pose& p = traj.poses[i];
    const double fields[8] = {p.timestamp.value_or(static_cast<double>(i)),
                              p.translation.x(), p.translation.y(), p.translation.z(),
                              p.rotation.x(), p.rotation.y(), p.rotation.z(), p.rotation.w()};
    for (int k = 0; k < 8; ++k) {
      if (k > 0) out += ' ';
      AppendNumber(out, fields[k]);
    }
    out += '\n';
  }
  return out;
}

void WriteTum(const fs::path& path, const Trajectory& traj) {
  WriteTextFile(path, FormatTum(traj));
}

}  // namespace wanderkit
