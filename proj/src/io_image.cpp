#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image ReadPng(const fs::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) Fail(ErrorCode::kIo, "cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) Fail(ErrorCode::kIo, "libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    Fail(ErrorCode::kIo, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorCode::kParse, path.string() + ": corrupt PNG");
  }
  png_init_io(png, file.get());
  png_read_png(png, info, PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA, nullptr);

  Image img;
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = png_get_channels(png, info);
  const int depth = png_get_bit_depth(png, info);
  png_bytepp rows = png_get_rows(png, info);
  if (img.channels != 1 && img.channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorCode::kParse, path.string() + ": unsupported PNG channel layout");
  }
  img.values.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  const std::size_t row_values = static_cast<std::size_t>(img.width) * img.channels;
  for (int y = 0; y < img.height; ++y) {
    const png_bytep row = rows[y];
    for (std::size_t i = 0; i < row_values; ++i) {
      const double v = depth == 16 ? ((row[2 * i] << 8) | row[2 * i + 1]) / 65535.0 : row[i] / 255.0;
      img.values[static_cast<std::size_t>(y) * row_values + i] = v;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

// Netpbm header token, skipping whitespace and '#' comments.
std::string NextPnmToken(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') ++pos;
  return data.substr(start, pos - start);
}

Image ReadPnm(const fs::path& path, const std::string& data) {
  std::size_t pos = 0;
  const std::string magic = NextPnmToken(data, pos);
  const int channels = magic == "P6" ? 3 : 1;
  auto number = [&](const char* what) {
    const std::string tok = NextPnmToken(data, pos);
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      Fail(ErrorCode::kParse, path.string() + ": bad " + what + " '" + tok + "'");
    }
    return v;
  };
  Image img;
  img.channels = channels;
  img.width = number("width");
  img.height = number("height");
  const int maxval = number("maxval");
  if (img.width <= 0 || img.height <= 0) Fail(ErrorCode::kParse, path.string() + ": empty image");
  if (maxval < 1 || maxval > 65535) Fail(ErrorCode::kParse, path.string() + ": maxval out of range");
  ++pos;  // single whitespace byte before the raster
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * channels;
  const std::size_t bytes = maxval < 256 ? 1 : 2;
  if (pos + n * bytes > data.size()) {
    Fail(ErrorCode::kParse, path.string() + ": raster truncated (expected " + std::to_string(n * bytes) +
                                " bytes, found " + std::to_string(data.size() - std::min(pos, data.size())) + ")");
  }
  img.values.resize(n);
  const auto* raw = reinterpret_cast<const unsigned char*>(data.data() + pos);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    if (v > maxval) Fail(ErrorCode::kParse, path.string() + ": sample exceeds maxval");
    img.values[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Image ReadImage(const fs::path& path) {
  const std::string data = ReadTextFile(path);
  static const unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::memcmp(data.data(), kPngMagic, 8) == 0) return ReadPng(path);
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6')) {
    return ReadPnm(path, data);
  }
  Fail(ErrorCode::kParse, path.string() + ": not a PNG or binary PPM/PGM image");
}

void WritePng(const fs::path& path, const Image& image) {
  image.Validate();
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> bytes(image.values.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = ToByte(image.values[i]);
  if (!png_image_write_to_file(&png, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    Fail(ErrorCode::kIo, "cannot write " + path.string() + ": " + png.message);
  }
}

void WritePnm(const fs::path& path, const Image& image) {
  image.Validate();
  std::string out = (image.channels == 3 ? "P6\n" : "P5\n") + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  for (double v : image.values) out.push_back(static_cast<char>(ToByte(v)));
  WriteTextFile(path, out);
}

}  // namespace wanderkit
