// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/demo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wfp/metrics.hpp"

namespace wfp {

ImageBuffer make_demo_scene(int size) {
  // 4x4 colour-checker patches (8-bit sRGB) on a lit wall.
  static constexpr unsigned char kPalette[16][3] = {
      {115, 82, 68},  {194, 150, 130}, {98, 122, 157}, {87, 108, 67},
      {133, 128, 177}, {103, 189, 170}, {214, 126, 44}, {80, 91, 166},
      {193, 90, 99},  {94, 60, 108},  {157, 188, 64}, {224, 163, 46},
      {56, 61, 150},  {70, 148, 73},  {175, 54, 60},  {231, 199, 31}};
  ImageBuffer img(size, size, 3);
  const double pi = std::numbers::pi;
  const double cell = size / 4.0;
  const double margin = 0.15 * cell;
  for (int y = 0; y < size; ++y) {
    const double v = static_cast<double>(y) / (size - 1);
    const int row = std::min(3, static_cast<int>(y / cell));
    const double in_y = y - row * cell;
    for (int x = 0; x < size; ++x) {
      const double u = static_cast<double>(x) / (size - 1);
      const int col = std::min(3, static_cast<int>(x / cell));
      const double in_x = x - col * cell;
      const double light = 1.0 - 0.12 * ((u - 0.5) * (u - 0.5) + (v - 0.5) * (v - 0.5));
      double rgb[3] = {0.78, 0.74, 0.68};
      if (in_x > margin && in_x < cell - margin && in_y > margin &&
          in_y < cell - margin) {
        for (int c = 0; c < 3; ++c) rgb[c] = kPalette[row * 4 + col][c] / 255.0;
      }
      const double texture =
          0.03 * std::sin(2.0 * pi * 11.0 * u) * std::sin(2.0 * pi * 13.0 * v);
      for (int c = 0; c < 3; ++c) {
        img(c, y, x) = std::clamp(light * rgb[c] + texture, 0.0, 1.0);
      }
    }
  }
  img.retag(RangeTag::display);
  return img;
}

ImageBuffer darken_gamma(const ImageBuffer& img, double gamma) {
  ImageBuffer out = img;
  for (double& v : out.samples()) v = std::pow(v, gamma);
  return out;
}

ImageBuffer invert(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (double& v : out.samples()) v = 1.0 - v;
  return out;
}

EnhanceConfig DemoSettings::default_config() {
  EnhanceConfig cfg;
  cfg.steps = 100;
  cfg.semantic_interval = 20;
  cfg.seed = 42;
  cfg.denoise_strength = 0.05;
  return cfg;
}

DemoReport run_demo(const DemoSettings& settings) {
  ImageBuffer clean = make_demo_scene(settings.size);
  ImageBuffer dark = darken_gamma(clean, settings.gamma);
  const GaussianPriorPredictor predictor(settings.prior_mean,
                                         settings.prior_stddev);
  const MockScorer scorer;
  EnhanceResult result = enhance(dark, settings.config, predictor, &scorer);

  DemoReport report{clean,
                    dark,
                    result.image,
                    std::move(result.trace),
                    mean(luminance(result.image, LuminanceMode::channel_mean)),
                    psnr(dark, clean),
                    psnr(result.image, clean),
                    ssim(dark, clean),
                    ssim(result.image, clean),
                    loe(dark, result.image),
                    loe(dark, invert(dark))};
  return report;
}

}  // namespace wfp
