#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"
#include "wanderkit/serialize.hpp"

namespace wanderkit {
namespace {

Json Vec3Json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 Vec3FromJson(const Json& j) {
  if (!j.is_array() || j.size() != 3) Fail(ErrorCode::kParse, "expected a 3-element array");
  return {NumberFromJson(j[0]), NumberFromJson(j[1]), NumberFromJson(j[2])};
}

Json ParseJsonFile(const fs::path& path) {
  try {
    return Json::parse(ReadTextFile(path));
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

template <typename T>
T Field(const Json& j, const char* key) {
  if (!j.contains(key)) Fail(ErrorCode::kParse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("field '") + key + "': " + e.what());
  }
}

double NumberField(const Json& j, const char* key) {
  if (!j.contains(key)) Fail(ErrorCode::kParse, std::string("missing field '") + key + "'");
  return NumberFromJson(j.at(key));
}

std::string CsvNumber(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Json JsonNumber(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double NumberFromJson(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    Fail(ErrorCode::kParse, "expected a number, got string '" + s + "'");
  }
  if (!j.is_number()) Fail(ErrorCode::kParse, "expected a number, got " + j.dump());
  return j.get<double>();
}

Json ToJson(const PoseMetricReport& r) {
  return {{"t_ate_raw", JsonNumber(r.t_ate_raw)},
          {"t_ate_scaled", JsonNumber(r.t_ate_scaled)},
          {"r_ate", JsonNumber(r.r_ate)},
          {"t_rte", JsonNumber(r.t_rte)},
          {"t_rte_deg", JsonNumber(r.t_rte_deg)},
          {"r_rte", JsonNumber(r.r_rte)},
          {"auc_at_30", JsonNumber(r.auc_at_30)},
          {"n_poses", r.n_poses},
          {"degenerate_pairs_skipped", r.degenerate_pairs_skipped},
          {"alignment_rank_deficient", r.alignment_rank_deficient}};
}

PoseMetricReport PoseMetricReportFromJson(const Json& j) {
  PoseMetricReport r;
  r.t_ate_raw = NumberField(j, "t_ate_raw");
  r.t_ate_scaled = NumberField(j, "t_ate_scaled");
  r.r_ate = NumberField(j, "r_ate");
  r.t_rte = NumberField(j, "t_rte");
  r.t_rte_deg = NumberField(j, "t_rte_deg");
  r.r_rte = NumberField(j, "r_rte");
  r.auc_at_30 = NumberField(j, "auc_at_30");
  r.n_poses = Field<std::size_t>(j, "n_poses");
  r.degenerate_pairs_skipped = Field<std::size_t>(j, "degenerate_pairs_skipped");
  r.alignment_rank_deficient = Field<bool>(j, "alignment_rank_deficient");
  return r;
}

Json ToJson(const DatasetSummary& s) {
  Json mean, median;
  const std::pair<const char*, const MetricStats*> metrics[] = {
      {"t_ate_raw", &s.t_ate_raw}, {"t_ate_scaled", &s.t_ate_scaled}, {"r_ate", &s.r_ate},
      {"t_rte", &s.t_rte},         {"t_rte_deg", &s.t_rte_deg},       {"r_rte", &s.r_rte},
      {"auc_at_30", &s.auc_at_30}};
  for (const auto& [name, stats] : metrics) {
    mean[name] = JsonNumber(stats->mean);
    median[name] = JsonNumber(stats->median);
  }
  return {{"n_scenes", s.n_scenes},
          {"n_failed", s.n_failed},
          {"success_rate", JsonNumber(s.success_rate)},
          {"mean", mean},
          {"median", median}};
}

Json ToJson(const NavReport& r) {
  return {{"ne", JsonNumber(r.ne)},   {"sr", JsonNumber(r.sr)},
          {"spl", JsonNumber(r.spl)}, {"ir", JsonNumber(r.ir)},
          {"n_episodes", r.n_episodes}, {"n_excluded", r.n_excluded}};
}

Json ToJson(const Path& path) {
  Json pts = Json::array();
  for (const Vec3& p : path.waypoints) pts.push_back(Vec3Json(p));
  return {{"format_version", 1}, {"length", path.length}, {"waypoints", pts}};
}

Json ToJson(const SimConfig& c) {
  return {{"success_radius", c.success_radius}, {"stuck_window", c.stuck_window},
          {"stuck_delta", c.stuck_delta},       {"v_max", c.v_max},
          {"w_max", c.w_max},                   {"dt", c.dt},
          {"max_steps", c.max_steps},           {"agent_radius", c.path.agent_radius},
          {"snap_cap", c.path.snap_cap}};
}

Json ToJson(const RewardConfig& c) {
  return {{"r_succ", c.r_succ}, {"r_fail", c.r_fail}, {"alpha", c.alpha},
          {"beta", c.beta},     {"gamma", c.gamma}};
}

std::string SummaryCsv(const std::vector<SceneReportRow>& rows) {
  std::string out =
      "scene_id,method,n_poses,t_ate_raw,t_ate_scaled,r_ate,t_rte,t_rte_deg,r_rte,auc_at_30,success,"
      "degenerate_pairs_skipped,alignment_rank_deficient\n";
  for (const auto& row : rows) {
    const PoseMetricReport& r = row.report;
    out += row.scene_id + "," + row.method + "," + std::to_string(r.n_poses) + ",";
    if (r.failed()) {
      out += ",,,,,,,0,0,0\n";
      continue;
    }
    for (double v : {r.t_ate_raw, r.t_ate_scaled, r.r_ate, r.t_rte, r.t_rte_deg, r.r_rte, r.auc_at_30}) {
      out += CsvNumber(v) + ",";
    }
    out += std::string(SceneSuccess(r.auc_at_30) ? "1" : "0") + "," +
           std::to_string(r.degenerate_pairs_skipped) + "," +
           (r.alignment_rank_deficient ? "1" : "0") + "\n";
  }
  return out;
}

void WriteNavMeshJson(const fs::path& path, const NavMesh& navmesh, const std::string& source_mesh,
                      double weld_tolerance) {
  Json adjacency = Json::array();
  for (const auto& links : navmesh.adjacency()) {
    Json row = Json::array();
    for (const auto& link : links) row.push_back(link.neighbor);
    adjacency.push_back(row);
  }
  Json regions = Json::array();
  for (std::uint32_t t = 0; t < navmesh.num_triangles(); ++t) regions.push_back(navmesh.region(t));
  const Json doc = {{"format_version", 1},
                    {"source_mesh", source_mesh},
                    {"up_axis", Vec3Json(navmesh.up())},
                    {"weld_tolerance", weld_tolerance},
                    {"triangles", navmesh.source_faces()},
                    {"adjacency", adjacency},
                    {"regions", regions}};
  WriteTextFile(path, doc.dump() + "\n");
}

NavMesh ReadNavMeshJson(const fs::path& path) {
  const Json doc = ParseJsonFile(path);
  try {
    if (Field<int>(doc, "format_version") != 1) Fail(ErrorCode::kParse, "unsupported format_version");
    fs::path source = Field<std::string>(doc, "source_mesh");
    if (source.is_relative()) source = path.parent_path() / source;
    const TriangleMesh mesh = ReadMesh(source);
    const auto faces = Field<std::vector<std::uint32_t>>(doc, "triangles");
    const Vec3 up = Vec3FromJson(doc.at("up_axis"));
    const double weld = doc.contains("weld_tolerance") ? NumberField(doc, "weld_tolerance") : 1e-6;
    for (std::uint32_t f : faces) {
      if (f >= mesh.num_faces()) {
        Fail(ErrorCode::kParse, "face " + std::to_string(f) + " not in " + source.string());
      }
    }
    NavMesh nav = NavMesh::FromFaces(mesh, faces, up, weld);
    if (doc.contains("adjacency")) {
      const auto stored = Field<std::vector<std::vector<std::uint32_t>>>(doc, "adjacency");
      bool same = stored.size() == nav.num_triangles();
      for (std::size_t t = 0; same && t < stored.size(); ++t) {
        const auto& links = nav.adjacency()[t];
        same = links.size() == stored[t].size();
        for (std::size_t k = 0; same && k < links.size(); ++k) same = links[k].neighbor == stored[t][k];
      }
      if (!same) Fail(ErrorCode::kParse, "stored adjacency does not match the source mesh");
    }
    return nav;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WritePathJson(const fs::path& path, const Path& waypoints) {
  WriteTextFile(path, ToJson(waypoints).dump() + "\n");
}

Path ReadPathJson(const fs::path& path) {
  const Json doc = ParseJsonFile(path);
  Path out;
  try {
    for (const Json& p : doc.at("waypoints")) out.waypoints.push_back(Vec3FromJson(p));
    out.length = NumberField(doc, "length");
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return out;
}

Json EpisodeToJson(const Episode& ep, const std::string& scene_id, const SimConfig& sim,
                   const RewardConfig& reward) {
  Json states = Json::array();
  for (const AgentState& s : ep.states) {
    states.push_back({{"step", s.step_index}, {"position", Vec3Json(s.position)}, {"heading", s.heading}});
  }
  Json actions = Json::array();
  for (const Action& a : ep.actions) {
    actions.push_back({{"forward_velocity", a.forward_velocity}, {"yaw_rate", a.yaw_rate}, {"dt", a.dt}});
  }
  Json distances = Json::array();
  for (double d : ep.goal_distances) distances.push_back(JsonNumber(d));
  Json j = {{"scene_id", scene_id},
            {"seed", ep.seed},
            {"config", {{"sim", ToJson(sim)}, {"reward", ToJson(reward)}}},
            {"start", Vec3Json(ep.start)},
            {"goal", Vec3Json(ep.goal)},
            {"optimal_length", ep.optimal_length},
            {"actual_length", ep.actual_length},
            {"termination", ToString(ep.termination)},
            {"states", states},
            {"actions", actions},
            {"rewards", ep.rewards},
            {"goal_distances", distances}};
  if (!ep.harness_error.empty()) j["harness_error"] = ep.harness_error;
  return j;
}

Episode EpisodeFromJson(const Json& j) {
  Episode ep;
  try {
    ep.seed = j.value("seed", std::uint64_t{0});
    ep.start = Vec3FromJson(j.at("start"));
    ep.goal = Vec3FromJson(j.at("goal"));
    ep.optimal_length = NumberField(j, "optimal_length");
    ep.actual_length = NumberField(j, "actual_length");
    ep.termination = TerminationFromString(Field<std::string>(j, "termination"));
    for (const Json& s : j.at("states")) {
      AgentState st;
      st.step_index = Field<int>(s, "step");
      st.position = Vec3FromJson(s.at("position"));
      st.heading = NumberField(s, "heading");
      ep.states.push_back(st);
    }
    for (const Json& a : j.at("actions")) {
      Action act;
      act.forward_velocity = NumberField(a, "forward_velocity");
      act.yaw_rate = NumberField(a, "yaw_rate");
      act.dt = NumberField(a, "dt");
      ep.actions.push_back(act);
    }
    for (const Json& r : j.at("rewards")) ep.rewards.push_back(NumberFromJson(r));
    if (j.contains("goal_distances")) {
      for (const Json& d : j.at("goal_distances")) ep.goal_distances.push_back(NumberFromJson(d));
    }
    ep.harness_error = j.value("harness_error", std::string());
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("episode record: ") + e.what());
  }
  if (ep.states.empty()) Fail(ErrorCode::kParse, "episode record has no states");
  if (ep.rewards.size() != ep.actions.size() || ep.states.size() != ep.actions.size() + 1) {
    Fail(ErrorCode::kParse, "episode record has inconsistent state/action/reward counts");
  }
  return ep;
}

std::vector<Episode> ReadEpisodesJsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Episode> episodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      episodes.push_back(EpisodeFromJson(Json::parse(line)));
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      Fail(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return episodes;
}

CameraIntrinsics ReadIntrinsicsJson(const fs::path& path) {
  const Json doc = ParseJsonFile(path);
  CameraIntrinsics k;
  try {
    k.fx = NumberField(doc, "fx");
    k.fy = NumberField(doc, "fy");
    k.cx = NumberField(doc, "cx");
    k.cy = NumberField(doc, "cy");
    k.width = Field<int>(doc, "width");
    k.height = Field<int>(doc, "height");
    k.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return k;
}

}  // namespace wanderkit
