#include <cmath>
#include <cstdint>
#include <cstring>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

constexpr char kGridMagic[8] = {'W', 'K', 'G', 'R', 'I', 'D', '0', '1'};
constexpr char kDepthMagic[4] = {'W', 'K', 'D', 'M'};

template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  out.append(buf, sizeof v);
}

class Reader {
 public:
  Reader(const fs::path& path, std::string data) : path_(path), data_(std::move(data)) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  const char* Take(std::size_t n) {
    Need(n);
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool AtEnd() const { return pos_ == data_.size(); }
  const fs::path& path() const { return path_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      Fail(ErrorCode::kParse, path_.string() + ": truncated (needed " + std::to_string(n) +
                                  " more bytes at offset " + std::to_string(pos_) + ")");
    }
  }
  fs::path path_;
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

void WriteOccupancyGrid(const fs::path& path, const OccupancyGrid& grid) {
  std::string out(kGridMagic, sizeof kGridMagic);
  for (int a = 0; a < 3; ++a) Put(out, grid.origin[a]);
  Put(out, grid.voxel_size);
  for (int a = 0; a < 3; ++a) Put(out, static_cast<std::uint32_t>(grid.dims[a]));
  std::string bits((grid.num_cells() + 7) / 8, '\0');
  for (std::size_t i = 0; i < grid.num_cells(); ++i) {
    if (grid.counts[i] >= grid.min_points) bits[i / 8] = static_cast<char>(bits[i / 8] | (1u << (i % 8)));
  }
  out += bits;
  WriteTextFile(path, out);
}

OccupancyGrid ReadOccupancyGrid(const fs::path& path) {
  Reader in(path, ReadTextFile(path));
  if (std::memcmp(in.Take(sizeof kGridMagic), kGridMagic, sizeof kGridMagic) != 0) {
    Fail(ErrorCode::kParse, path.string() + ": not an occupancy grid dump");
  }
  Vec3 origin;
  for (int a = 0; a < 3; ++a) origin[a] = in.Get<double>();
  const double voxel = in.Get<double>();
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const auto d = in.Get<std::uint32_t>();
    if (d == 0 || d > (1u << 20)) Fail(ErrorCode::kParse, path.string() + ": bad grid dimension");
    dims[a] = static_cast<int>(d);
  }
  if (!(voxel > 0.0) || !origin.allFinite()) Fail(ErrorCode::kParse, path.string() + ": bad grid geometry");
  OccupancyGrid grid = OccupancyGrid::Empty(origin, voxel, dims);
  grid.min_points = 1;
  const char* bits = in.Take((grid.num_cells() + 7) / 8);
  for (std::size_t i = 0; i < grid.num_cells(); ++i) {
    grid.counts[i] = (static_cast<unsigned char>(bits[i / 8]) >> (i % 8)) & 1u;
  }
  if (!in.AtEnd()) Fail(ErrorCode::kParse, path.string() + ": trailing bytes after grid bitmap");
  return grid;
}

void WriteDepthMap(const fs::path& path, const DepthMap& map) {
  std::string out(kDepthMagic, sizeof kDepthMagic);
  Put(out, static_cast<std::uint32_t>(map.width));
  Put(out, static_cast<std::uint32_t>(map.height));
  Put(out, DepthMap::kNoData);
  for (float d : map.depth) Put(out, d);
  WriteTextFile(path, out);
}

DepthMap ReadDepthMap(const fs::path& path) {
  Reader in(path, ReadTextFile(path));
  if (std::memcmp(in.Take(sizeof kDepthMagic), kDepthMagic, sizeof kDepthMagic) != 0) {
    Fail(ErrorCode::kParse, path.string() + ": not a depth map");
  }
  const auto w = in.Get<std::uint32_t>();
  const auto h = in.Get<std::uint32_t>();
  const auto sentinel = in.Get<float>();
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) {
    Fail(ErrorCode::kParse, path.string() + ": bad depth map size");
  }
  DepthMap map(static_cast<int>(w), static_cast<int>(h));
  const char* raw = in.Take(map.depth.size() * sizeof(float));
  for (std::size_t i = 0; i < map.depth.size(); ++i) {
    float d;
    std::memcpy(&d, raw + i * sizeof d, sizeof d);
    // Maps written with another no-data marker are normalized to +inf.
    map.depth[i] = (d == sentinel || (std::isnan(d) && std::isnan(sentinel))) ? DepthMap::kNoData : d;
  }
  if (!in.AtEnd()) Fail(ErrorCode::kParse, path.string() + ": trailing bytes after depth values");
  return map;
}

}  // namespace wanderkit
