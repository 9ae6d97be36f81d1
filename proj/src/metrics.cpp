// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "wfp/error.hpp"

namespace wfp {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr int kLoeTarget = 50;

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b,
                        const char* metric) {
  if (!a.same_shape(b)) {
    throw ShapeError(fmt::format("{}: {}x{}x{} vs {}x{}x{}", metric,
                                 a.height(), a.width(), a.channels(),
                                 b.height(), b.width(), b.channels()));
  }
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

/// Separable "valid" filtering of a single plane.
std::vector<double> filter_valid(const std::vector<double>& src, int height,
                                 int width,
                                 const std::array<double, kWindow>& taps) {
  const int out_h = height - kWindow + 1;
  const int out_w = width - kWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(height) * out_w);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        acc += taps[k] * src[static_cast<std::size_t>(y) * width + x + k];
      }
      rows[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_h) * out_w);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        acc += taps[k] * rows[static_cast<std::size_t>(y + k) * out_w + x];
      }
      out[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "psnr");
  double sum = 0.0;
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(sa.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "ssim");
  if (a.height() < kWindow || a.width() < kWindow) {
    throw SizeError(fmt::format("ssim needs at least {}x{}, got {}x{}",
                                kWindow, kWindow, a.height(), a.width()));
  }
  const ImageBuffer la = luminance(a, LuminanceMode::channel_mean);
  const ImageBuffer lb = luminance(b, LuminanceMode::channel_mean);
  const int height = a.height();
  const int width = a.width();
  const std::size_t n = la.plane_size();

  std::vector<double> x(la.samples().begin(), la.samples().end());
  std::vector<double> y(lb.samples().begin(), lb.samples().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto taps = gaussian_taps();
  const auto mu_x = filter_valid(x, height, width, taps);
  const auto mu_y = filter_valid(y, height, width, taps);
  const auto e_xx = filter_valid(xx, height, width, taps);
  const auto e_yy = filter_valid(yy, height, width, taps);
  const auto e_xy = filter_valid(xy, height, width, taps);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
             ((mx * mx + my * my + kC1) * (vx + vy + kC2));
  }
  return total / static_cast<double>(mu_x.size());
}

ImageBuffer loe_downsample(const ImageBuffer& plane) {
  const int shortest = std::min(plane.height(), plane.width());
  if (shortest <= kLoeTarget) return plane;
  const double ratio = static_cast<double>(kLoeTarget) / shortest;
  const int out_h = static_cast<int>(std::lround(plane.height() * ratio));
  const int out_w = static_cast<int>(std::lround(plane.width() * ratio));
  ImageBuffer out(out_h, out_w, plane.channels());
  for (int c = 0; c < plane.channels(); ++c) {
    for (int y = 0; y < out_h; ++y) {
      const int sy = std::min(
          plane.height() - 1,
          static_cast<int>((y + 0.5) * plane.height() / out_h));
      for (int x = 0; x < out_w; ++x) {
        const int sx = std::min(
            plane.width() - 1,
            static_cast<int>((x + 0.5) * plane.width() / out_w));
        out(c, y, x) = plane(c, sy, sx);
      }
    }
  }
  return out;
}

double loe(const ImageBuffer& original, const ImageBuffer& enhanced) {
  require_same_shape(original, enhanced, "loe");
  const ImageBuffer lo =
      loe_downsample(luminance(original, LuminanceMode::channel_max));
  const ImageBuffer le =
      loe_downsample(luminance(enhanced, LuminanceMode::channel_max));
  const auto a = lo.samples();
  const auto b = le.samples();
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flips = 0;
    for (std::size_t j = 0; j < n; ++j) {
      flips += static_cast<std::size_t>((a[i] >= a[j]) != (b[i] >= b[j]));
    }
    total += static_cast<double>(flips);
  }
  return total / static_cast<double>(n);
}

}  // namespace wfp
