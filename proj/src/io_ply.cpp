#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary PLY handling assumes a little-endian host");

namespace wanderkit {
namespace {

enum class Scalar { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

Scalar ParseScalar(const std::string& name) {
  if (name == "char" || name == "int8") return Scalar::kInt8;
  if (name == "uchar" || name == "uint8") return Scalar::kUInt8;
  if (name == "short" || name == "int16") return Scalar::kInt16;
  if (name == "ushort" || name == "uint16") return Scalar::kUInt16;
  if (name == "int" || name == "int32") return Scalar::kInt32;
  if (name == "uint" || name == "uint32") return Scalar::kUInt32;
  if (name == "float" || name == "float32") return Scalar::kFloat32;
  if (name == "double" || name == "float64") return Scalar::kFloat64;
  Fail(ErrorCode::kParse, "unknown PLY property type '" + name + "'");
}

std::size_t ScalarSize(Scalar s) {
  switch (s) {
    case Scalar::kInt8:
    case Scalar::kUInt8: return 1;
    case Scalar::kInt16:
    case Scalar::kUInt16: return 2;
    case Scalar::kInt32:
    case Scalar::kUInt32:
    case Scalar::kFloat32: return 4;
    case Scalar::kFloat64: return 8;
  }
  return 0;
}

bool IsFloating(Scalar s) { return s == Scalar::kFloat32 || s == Scalar::kFloat64; }

template <typename T>
T Load(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

double LoadScalar(Scalar s, const char* p) {
  switch (s) {
    case Scalar::kInt8: return Load<std::int8_t>(p);
    case Scalar::kUInt8: return Load<std::uint8_t>(p);
    case Scalar::kInt16: return Load<std::int16_t>(p);
    case Scalar::kUInt16: return Load<std::uint16_t>(p);
    case Scalar::kInt32: return Load<std::int32_t>(p);
    case Scalar::kUInt32: return Load<std::uint32_t>(p);
    case Scalar::kFloat32: return Load<float>(p);
    case Scalar::kFloat64: return Load<double>(p);
  }
  return 0.0;
}

// Value as stored in a property of type s (integers must already be in
// range; the caller validates).
double Coerce(Scalar s, double v) {
  switch (s) {
    case Scalar::kFloat32: return static_cast<float>(v);
    case Scalar::kFloat64: return v;
    default: return v;
  }
}

bool InRange(Scalar s, double v) {
  if (IsFloating(s)) return true;
  if (v != std::floor(v)) return false;
  switch (s) {
    case Scalar::kInt8: return v >= INT8_MIN && v <= INT8_MAX;
    case Scalar::kUInt8: return v >= 0 && v <= UINT8_MAX;
    case Scalar::kInt16: return v >= INT16_MIN && v <= INT16_MAX;
    case Scalar::kUInt16: return v >= 0 && v <= UINT16_MAX;
    case Scalar::kInt32: return v >= INT32_MIN && v <= INT32_MAX;
    case Scalar::kUInt32: return v >= 0 && v <= UINT32_MAX;
    default: return true;
  }
}

template <typename T>
void Store(std::string& out, T v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  out.append(buf, sizeof v);
}

void StoreScalar(std::string& out, Scalar s, double v) {
  switch (s) {
    case Scalar::kInt8: Store(out, static_cast<std::int8_t>(v)); break;
    case Scalar::kUInt8: Store(out, static_cast<std::uint8_t>(v)); break;
    case Scalar::kInt16: Store(out, static_cast<std::int16_t>(v)); break;
    case Scalar::kUInt16: Store(out, static_cast<std::uint16_t>(v)); break;
    case Scalar::kInt32: Store(out, static_cast<std::int32_t>(v)); break;
    case Scalar::kUInt32: Store(out, static_cast<std::uint32_t>(v)); break;
    case Scalar::kFloat32: Store(out, static_cast<float>(v)); break;
    case Scalar::kFloat64: Store(out, v); break;
  }
}

void FormatScalar(std::string& out, Scalar s, double v) {
  char buf[40];
  int n = 0;
  switch (s) {
    case Scalar::kFloat32: n = std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(v))); break;
    case Scalar::kFloat64: n = std::snprintf(buf, sizeof buf, "%.17g", v); break;
    default: n = std::snprintf(buf, sizeof buf, "%.0f", v); break;
  }
  out.append(buf, static_cast<std::size_t>(n));
}

struct Property {
  std::string name;
  std::string type_name;
  Scalar type = Scalar::kFloat32;
  bool is_list = false;
  Scalar count_type = Scalar::kUInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;

  // Filled while reading: scalar properties row-major, and the first list
  // property (if any) per row.
  std::vector<double> scalars;
  std::size_t scalar_width = 0;
  std::vector<std::vector<std::int64_t>> lists;
};

struct PlyData {
  PlyFormat format = PlyFormat::kAscii;
  std::vector<Element> elements;

  const Element* Find(const std::string& name) const {
    for (const auto& e : elements) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

std::vector<std::string> Split(const std::string& line) {
  std::istringstream ss(line);
  return {std::istream_iterator<std::string>(ss), std::istream_iterator<std::string>()};
}

void ParseHeader(std::istream& in, PlyData& ply) {
  std::string line;
  if (!std::getline(in, line) || (line != "ply" && line != "ply\r")) {
    Fail(ErrorCode::kParse, "not a PLY file (missing 'ply' magic line)");
  }
  bool have_format = false;
  int line_no = 1;
  while (true) {
    if (!std::getline(in, line)) Fail(ErrorCode::kParse, "PLY header ends without end_header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tok = Split(line);
    if (tok.empty()) continue;
    const std::string where = " (header line " + std::to_string(line_no) + ")";
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() != 3) Fail(ErrorCode::kParse, "malformed format line" + where);
      if (tok[1] == "ascii") {
        ply.format = PlyFormat::kAscii;
      } else if (tok[1] == "binary_little_endian") {
        ply.format = PlyFormat::kBinaryLittleEndian;
      } else if (tok[1] == "binary_big_endian") {
        Fail(ErrorCode::kParse,
             "big-endian PLY is not supported; convert the file to binary_little_endian or ascii");
      } else {
        Fail(ErrorCode::kParse, "unknown PLY format '" + tok[1] + "'" + where);
      }
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) Fail(ErrorCode::kParse, "malformed element line" + where);
      Element e;
      e.name = tok[1];
      std::uint64_t count = 0;
      const auto [ptr, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), count);
      if (ec != std::errc() || ptr != tok[2].data() + tok[2].size()) {
        Fail(ErrorCode::kParse, "bad element count '" + tok[2] + "'" + where);
      }
      e.count = count;
      ply.elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (ply.elements.empty()) Fail(ErrorCode::kParse, "property before any element" + where);
      Property p;
      if (tok.size() == 5 && tok[1] == "list") {
        p.is_list = true;
        p.count_type = ParseScalar(tok[2]);
        if (IsFloating(p.count_type)) Fail(ErrorCode::kParse, "list count type must be integral" + where);
        p.type_name = tok[3];
        p.type = ParseScalar(tok[3]);
        p.name = tok[4];
      } else if (tok.size() == 3) {
        p.type_name = tok[1];
        p.type = ParseScalar(tok[1]);
        p.name = tok[2];
      } else {
        Fail(ErrorCode::kParse, "malformed property line" + where);
      }
      ply.elements.back().properties.push_back(std::move(p));
    } else {
      Fail(ErrorCode::kParse, "unexpected header keyword '" + tok[0] + "'" + where);
    }
  }
  if (!have_format) Fail(ErrorCode::kParse, "PLY header has no format line");
}

[[noreturn]] void Truncated(const Element& e, std::size_t read) {
  Fail(ErrorCode::kParse, "truncated PLY body: expected " + std::to_string(e.count) + " " + e.name +
                              " elements, read " + std::to_string(read));
}

void ReadBinaryBody(std::istream& in, PlyData& ply) {
  const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  for (Element& e : ply.elements) {
    std::size_t scalar_width = 0;
    bool has_list = false;
    for (const auto& p : e.properties) {
      if (p.is_list) has_list = true;
      else ++scalar_width;
    }
    e.scalar_width = scalar_width;
    e.scalars.reserve(std::min<std::size_t>(e.count, body.size()) * scalar_width);
    if (has_list) e.lists.reserve(std::min<std::size_t>(e.count, body.size()));
    for (std::size_t row = 0; row < e.count; ++row) {
      bool first_list = true;
      for (const auto& p : e.properties) {
        if (!p.is_list) {
          const std::size_t sz = ScalarSize(p.type);
          if (pos + sz > body.size()) Truncated(e, row);
          e.scalars.push_back(LoadScalar(p.type, body.data() + pos));
          pos += sz;
          continue;
        }
        const std::size_t csz = ScalarSize(p.count_type);
        if (pos + csz > body.size()) Truncated(e, row);
        const double n = LoadScalar(p.count_type, body.data() + pos);
        pos += csz;
        if (n < 0) Fail(ErrorCode::kParse, "negative list length in element " + e.name);
        const std::size_t isz = ScalarSize(p.type);
        const auto count = static_cast<std::size_t>(n);
        if (pos + count * isz > body.size()) Truncated(e, row);
        if (first_list) {
          std::vector<std::int64_t> items(count);
          for (std::size_t k = 0; k < count; ++k) {
            items[k] = static_cast<std::int64_t>(LoadScalar(p.type, body.data() + pos + k * isz));
          }
          e.lists.push_back(std::move(items));
          first_list = false;
        }
        pos += count * isz;
      }
    }
  }
}

void ReadAsciiBody(std::istream& in, PlyData& ply) {
  auto next_token = [&](std::string& tok) { return static_cast<bool>(in >> tok); };
  auto parse_number = [](const std::string& tok, Scalar type, const Element& e) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      Fail(ErrorCode::kParse, "bad number '" + tok + "' in PLY element " + e.name);
    }
    if (!InRange(type, v)) {
      Fail(ErrorCode::kParse, "value '" + tok + "' out of range for its type in element " + e.name);
    }
    return Coerce(type, v);
  };
  std::string tok;
  for (Element& e : ply.elements) {
    for (const auto& p : e.properties) {
      if (!p.is_list) ++e.scalar_width;
    }
    for (std::size_t row = 0; row < e.count; ++row) {
      bool first_list = true;
      for (const auto& p : e.properties) {
        if (!next_token(tok)) Truncated(e, row);
        if (!p.is_list) {
          e.scalars.push_back(parse_number(tok, p.type, e));
          continue;
        }
        const double n = parse_number(tok, p.count_type, e);
        if (n < 0) Fail(ErrorCode::kParse, "negative list length in element " + e.name);
        std::vector<std::int64_t> items;
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
          if (!next_token(tok)) Truncated(e, row);
          items.push_back(static_cast<std::int64_t>(parse_number(tok, p.type, e)));
        }
        if (first_list) {
          e.lists.push_back(std::move(items));
          first_list = false;
        }
      }
    }
  }
}

PlyData ParsePly(std::istream& in) {
  PlyData ply;
  ParseHeader(in, ply);
  if (ply.format == PlyFormat::kAscii) {
    ReadAsciiBody(in, ply);
  } else {
    ReadBinaryBody(in, ply);
  }
  return ply;
}

PlyData ParsePlyFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ParsePly(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

int ScalarColumn(const Element& e, const std::string& name) {
  int col = 0;
  for (const auto& p : e.properties) {
    if (p.is_list) continue;
    if (p.name == name) return col;
    ++col;
  }
  return -1;
}

const Property* FindProperty(const Element& e, const std::string& name) {
  for (const auto& p : e.properties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Element& RequireVertexElement(const PlyData& ply) {
  const Element* v = ply.Find("vertex");
  if (v == nullptr) Fail(ErrorCode::kParse, "PLY has no vertex element");
  for (const char* axis : {"x", "y", "z"}) {
    const Property* p = FindProperty(*v, axis);
    if (p == nullptr || p->is_list) {
      Fail(ErrorCode::kParse, std::string("PLY vertex element lacks scalar property '") + axis + "'");
    }
  }
  return *v;
}

std::vector<Vec3> ReadPositions(const Element& v) {
  const int cx = ScalarColumn(v, "x"), cy = ScalarColumn(v, "y"), cz = ScalarColumn(v, "z");
  std::vector<Vec3> points(v.count);
  for (std::size_t i = 0; i < v.count; ++i) {
    const double* row = v.scalars.data() + i * v.scalar_width;
    points[i] = Vec3(row[cx], row[cy], row[cz]);
  }
  return points;
}

// Writer side: a flat description of the vertex properties plus a row
// producer.
struct OutProperty {
  std::string name;
  std::string type_name;
  Scalar type;
};

bool AllFloatExact(const std::vector<Vec3>& points) {
  for (const Vec3& p : points) {
    for (int k = 0; k < 3; ++k) {
      if (static_cast<double>(static_cast<float>(p[k])) != p[k]) return false;
    }
  }
  return true;
}

std::string Header(PlyFormat format, std::size_t n_vertices, const std::vector<OutProperty>& props,
                   std::size_t n_faces) {
  std::string h = "ply\nformat ";
  h += format == PlyFormat::kAscii ? "ascii" : "binary_little_endian";
  h += " 1.0\ncomment wanderkit\nelement vertex " + std::to_string(n_vertices) + "\n";
  for (const auto& p : props) h += "property " + p.type_name + " " + p.name + "\n";
  if (n_faces > 0) {
    h += "element face " + std::to_string(n_faces) + "\nproperty list uchar int vertex_indices\n";
  }
  h += "end_header\n";
  return h;
}

void AppendRow(std::string& out, PlyFormat format, const std::vector<OutProperty>& props,
               const std::vector<double>& row) {
  for (std::size_t k = 0; k < props.size(); ++k) {
    if (format == PlyFormat::kAscii) {
      if (k > 0) out += ' ';
      FormatScalar(out, props[k].type, row[k]);
    } else {
      StoreScalar(out, props[k].type, row[k]);
    }
  }
  if (format == PlyFormat::kAscii) out += '\n';
}

void AppendFaces(std::string& out, PlyFormat format, const std::vector<Triangle>& tris) {
  for (const Triangle& t : tris) {
    if (format == PlyFormat::kAscii) {
      out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    } else {
      Store(out, static_cast<std::uint8_t>(3));
      for (std::uint32_t v : t) Store(out, static_cast<std::int32_t>(v));
    }
  }
}

std::vector<OutProperty> PositionProperties(const std::vector<Vec3>& points) {
  const bool single = AllFloatExact(points);
  const std::string type_name = single ? "float" : "double";
  const Scalar type = single ? Scalar::kFloat32 : Scalar::kFloat64;
  return {{"x", type_name, type}, {"y", type_name, type}, {"z", type_name, type}};
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string SerializePointCloud(const PointCloud& cloud, PlyFormat format) {
  cloud.Validate();
  std::vector<OutProperty> props = PositionProperties(cloud.points);
  if (cloud.has_colors()) {
    for (const char* c : {"red", "green", "blue"}) props.push_back({c, "uchar", Scalar::kUInt8});
  }
  for (const auto& p : cloud.extra.properties) props.push_back({p.name, p.type, ParseScalar(p.type)});

  std::string out = Header(format, cloud.size(), props, 0);
  const std::size_t w = cloud.extra.properties.size();
  std::vector<double> row(props.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::size_t k = 0;
    for (int a = 0; a < 3; ++a) row[k++] = cloud.points[i][a];
    if (cloud.has_colors()) {
      for (int c = 0; c < 3; ++c) row[k++] = cloud.colors[i][c];
    }
    for (std::size_t e = 0; e < w; ++e) row[k++] = cloud.extra.values[i * w + e];
    AppendRow(out, format, props, row);
  }
  return out;
}

TriangleMesh MeshFromPly(const PlyData& ply) {
  const Element& v = RequireVertexElement(ply);
  TriangleMesh mesh;
  mesh.vertices = ReadPositions(v);
  const Element* f = ply.Find("face");
  if (f != nullptr) {
    const Property* idx = FindProperty(*f, "vertex_indices");
    if (idx == nullptr) idx = FindProperty(*f, "vertex_index");
    if (idx == nullptr || !idx->is_list) Fail(ErrorCode::kParse, "PLY face element lacks vertex_indices");
    if (&*std::find_if(f->properties.begin(), f->properties.end(),
                       [](const Property& p) { return p.is_list; }) != idx) {
      Fail(ErrorCode::kParse, "vertex_indices must be the first list property of a face");
    }
    for (std::size_t i = 0; i < f->lists.size(); ++i) {
      const auto& poly = f->lists[i];
      if (poly.size() < 3) Fail(ErrorCode::kParse, "face " + std::to_string(i) + " has fewer than 3 vertices");
      for (std::int64_t id : poly) {
        if (id < 0 || static_cast<std::size_t>(id) >= mesh.vertices.size()) {
          Fail(ErrorCode::kParse, "face " + std::to_string(i) + " references missing vertex " + std::to_string(id));
        }
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.triangles.push_back({static_cast<std::uint32_t>(poly[0]), static_cast<std::uint32_t>(poly[k]),
                                  static_cast<std::uint32_t>(poly[k + 1])});
      }
    }
  }
  return mesh;
}

}  // namespace

PointCloud ParsePointCloudPly(std::istream& in) {
  const PlyData ply = ParsePly(in);
  const Element& v = RequireVertexElement(ply);
  PointCloud cloud;
  cloud.points = ReadPositions(v);

  const Property* r = FindProperty(v, "red");
  const Property* g = FindProperty(v, "green");
  const Property* b = FindProperty(v, "blue");
  const bool rgb8 = r && g && b && !r->is_list && !g->is_list && !b->is_list &&
                    r->type == Scalar::kUInt8 && g->type == Scalar::kUInt8 && b->type == Scalar::kUInt8;
  std::vector<int> extra_cols;
  int col = 0;
  for (const auto& p : v.properties) {
    if (p.is_list) continue;
    const bool known = p.name == "x" || p.name == "y" || p.name == "z" ||
                       (rgb8 && (p.name == "red" || p.name == "green" || p.name == "blue"));
    if (!known) {
      cloud.extra.properties.push_back({p.name, p.type_name});
      extra_cols.push_back(col);
    }
    ++col;
  }
  if (rgb8) {
    const int cr = ScalarColumn(v, "red"), cg = ScalarColumn(v, "green"), cb = ScalarColumn(v, "blue");
    cloud.colors.resize(v.count);
    for (std::size_t i = 0; i < v.count; ++i) {
      const double* row = v.scalars.data() + i * v.scalar_width;
      cloud.colors[i] = {static_cast<std::uint8_t>(row[cr]), static_cast<std::uint8_t>(row[cg]),
                         static_cast<std::uint8_t>(row[cb])};
    }
  }
  if (!extra_cols.empty()) {
    cloud.extra.values.reserve(v.count * extra_cols.size());
    for (std::size_t i = 0; i < v.count; ++i) {
      const double* row = v.scalars.data() + i * v.scalar_width;
      for (int c : extra_cols) cloud.extra.values.push_back(row[c]);
    }
  }
  return cloud;
}

PointCloud ReadPointCloudPly(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ParsePointCloudPly(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WritePointCloudPly(std::ostream& out, const PointCloud& cloud, PlyFormat format) {
  const std::string bytes = SerializePointCloud(cloud, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void WritePointCloudPly(const fs::path& path, const PointCloud& cloud, PlyFormat format) {
  WriteFile(path, SerializePointCloud(cloud, format));
}

GaussianSet ReadGaussiansPly(const fs::path& path) {
  const PlyData ply = ParsePlyFile(path);
  const Element& v = RequireVertexElement(ply);
  const int cs = ScalarColumn(v, "scale"), co = ScalarColumn(v, "opacity");
  if (cs < 0 || co < 0) Fail(ErrorCode::kParse, path.string() + ": gaussian PLY needs scale and opacity");
  const int cr = ScalarColumn(v, "red"), cg = ScalarColumn(v, "green"), cb = ScalarColumn(v, "blue");
  const bool has_color = cr >= 0 && cg >= 0 && cb >= 0;
  const Property* red = FindProperty(v, "red");
  const double color_scale = has_color && !IsFloating(red->type) ? 1.0 / 255.0 : 1.0;

  GaussianSet set;
  set.centers = ReadPositions(v);
  for (std::size_t i = 0; i < v.count; ++i) {
    const double* row = v.scalars.data() + i * v.scalar_width;
    set.scales.push_back(row[cs]);
    set.opacities.push_back(row[co]);
    if (has_color) {
      set.colors.emplace_back(row[cr] * color_scale, row[cg] * color_scale, row[cb] * color_scale);
    } else {
      set.colors.emplace_back(0.5, 0.5, 0.5);
    }
  }
  try {
    set.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return set;
}

void WriteGaussiansPly(const fs::path& path, const GaussianSet& gaussians) {
  gaussians.Validate();
  std::vector<OutProperty> props = PositionProperties(gaussians.centers);
  props.push_back({"scale", "double", Scalar::kFloat64});
  props.push_back({"opacity", "double", Scalar::kFloat64});
  for (const char* c : {"red", "green", "blue"}) props.push_back({c, "uchar", Scalar::kUInt8});
  std::string out = Header(PlyFormat::kBinaryLittleEndian, gaussians.size(), props, 0);
  std::vector<double> row(props.size());
  for (std::size_t i = 0; i < gaussians.size(); ++i) {
    for (int a = 0; a < 3; ++a) row[a] = gaussians.centers[i][a];
    row[3] = gaussians.scales[i];
    row[4] = gaussians.opacities[i];
    for (int c = 0; c < 3; ++c) {
      row[5 + c] = std::round(std::clamp(gaussians.colors[i][c], 0.0, 1.0) * 255.0);
    }
    AppendRow(out, PlyFormat::kBinaryLittleEndian, props, row);
  }
  WriteFile(path, out);
}

TriangleMesh ReadMeshPly(const fs::path& path) {
  const PlyData ply = ParsePlyFile(path);
  try {
    return MeshFromPly(ply);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WriteMeshPly(const fs::path& path, const TriangleMesh& mesh) {
  mesh.Validate();
  const std::vector<OutProperty> props = PositionProperties(mesh.vertices);
  std::string out = Header(PlyFormat::kBinaryLittleEndian, mesh.vertices.size(), props,
                           mesh.triangles.size());
  // A zero face count would drop the face element from the header, which
  // readers treat the same as an empty one.
  std::vector<double> row(3);
  for (const Vec3& p : mesh.vertices) {
    for (int a = 0; a < 3; ++a) row[a] = p[a];
    AppendRow(out, PlyFormat::kBinaryLittleEndian, props, row);
  }
  AppendFaces(out, PlyFormat::kBinaryLittleEndian, mesh.triangles);
  WriteFile(path, out);
}

}  // namespace wanderkit
