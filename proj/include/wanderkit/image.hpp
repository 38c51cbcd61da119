#pragma once

#include <array>
#include <vector>

namespace wanderkit {

// Interleaved pixels with values in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  std::vector<double> values;

  Image() = default;
  Image(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c), values(static_cast<std::size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c) {
    return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c) const {
    return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  void Validate() const;
};

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

// Normalized 1D Gaussian taps; the 2D window is their outer product.
std::array<double, kSsimWindow> SsimWindow1d();

// 10 log10(1 / MSE) with peak 1. Identical images give +infinity.
double Psnr(const Image& pred, const Image& gt);

struct SsimOptions {
  // Compare Rec. 601 luma instead of averaging per-channel scores.
  bool luminance_only = false;
};

// Mean SSIM over the valid region (no padding) of the 11x11 window,
// averaged over channels.
double Ssim(const Image& pred, const Image& gt, const SsimOptions& options = {});

Image ToLuminance(const Image& image);

}  // namespace wanderkit
