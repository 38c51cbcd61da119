#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "wanderkit/error.hpp"
#include "wanderkit/image.hpp"

namespace wanderkit {
namespace {

void RequireSameShape(const Image& a, const Image& b) {
  a.Validate();
  b.Validate();
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    Fail(ErrorCode::kInvalidArgument,
         "image shapes differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) + "x" +
             std::to_string(a.channels) + " vs " + std::to_string(b.width) + "x" +
             std::to_string(b.height) + "x" + std::to_string(b.channels));
  }
}

// Valid-region separable filtering of the five SSIM moments for one
// channel, then the mean of the SSIM map.
double ChannelSsim(const Image& a, const Image& b, int c) {
  const auto w = SsimWindow1d();
  const int out_w = a.width - kSsimWindow + 1;
  const int out_h = a.height - kSsimWindow + 1;
  const auto row_len = static_cast<std::size_t>(out_w);

  // Horizontal pass: moments filtered along x for every input row.
  std::vector<double> hx(row_len * a.height), hy(hx.size()), hxx(hx.size()), hyy(hx.size()),
      hxy(hx.size());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (int k = 0; k < kSsimWindow; ++k) {
        const double p = a.at(x + k, y, c);
        const double q = b.at(x + k, y, c);
        sx += w[k] * p;
        sy += w[k] * q;
        sxx += w[k] * (p * p);
        syy += w[k] * (q * q);
        sxy += w[k] * (p * q);
      }
      const std::size_t i = static_cast<std::size_t>(y) * row_len + x;
      hx[i] = sx;
      hy[i] = sy;
      hxx[i] = sxx;
      hyy[i] = syy;
      hxy[i] = sxy;
    }
  }

  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double mx = 0, my = 0, exx = 0, eyy = 0, exy = 0;
      for (int k = 0; k < kSsimWindow; ++k) {
        const std::size_t i = static_cast<std::size_t>(y + k) * row_len + x;
        mx += w[k] * hx[i];
        my += w[k] * hy[i];
        exx += w[k] * hxx[i];
        eyy += w[k] * hyy[i];
        exy += w[k] * hxy[i];
      }
      const double vx = exx - mx * mx;
      const double vy = eyy - my * my;
      const double cov = exy - mx * my;
      total += ((2.0 * mx * my + kSsimC1) * (2.0 * cov + kSsimC2)) /
               ((mx * mx + my * my + kSsimC1) * (vx + vy + kSsimC2));
    }
  }
  return total / (static_cast<double>(out_w) * out_h);
}

}  // namespace

void Image::Validate() const {
  Require(width > 0 && height > 0, "image dimensions must be positive");
  Require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
  Require(values.size() == static_cast<std::size_t>(width) * height * channels,
          "image buffer size does not match its dimensions");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) Fail(ErrorCode::kInvalidArgument, "pixel value outside [0, 1]");
  }
}

std::array<double, kSsimWindow> SsimWindow1d() {
  std::array<double, kSsimWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

double Psnr(const Image& pred, const Image& gt) {
  RequireSameShape(pred, gt);
  double sse = 0.0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = pred.values[i] - gt.values[i];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(pred.values.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

Image ToLuminance(const Image& image) {
  image.Validate();
  if (image.channels == 1) return image;
  Image out(image.width, image.height, 1);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const double v = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                       0.114 * image.at(x, y, 2);
      out.at(x, y, 0) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

double Ssim(const Image& pred, const Image& gt, const SsimOptions& options) {
  RequireSameShape(pred, gt);
  if (pred.width < kSsimWindow || pred.height < kSsimWindow) {
    Fail(ErrorCode::kInvalidArgument, "image smaller than the 11x11 SSIM window");
  }
  if (options.luminance_only && pred.channels == 3) {
    return ChannelSsim(ToLuminance(pred), ToLuminance(gt), 0);
  }
  double sum = 0.0;
  for (int c = 0; c < pred.channels; ++c) sum += ChannelSsim(pred, gt, c);
  return sum / pred.channels;
}

}  // namespace wanderkit
