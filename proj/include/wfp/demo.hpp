// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <cstdint>

#include "wfp/image.hpp"
#include "wfp/pipeline.hpp"

namespace wfp {

/// Deterministic synthetic RGB scene: a colour-checker chart on an evenly
/// lit wall with fine texture. Display range.
ImageBuffer make_demo_scene(int size);

/// Pixelwise v -> v^gamma.
ImageBuffer darken_gamma(const ImageBuffer& img, double gamma);

/// Luminance-inverted control, v -> 1 - v.
ImageBuffer invert(const ImageBuffer& img);

struct DemoSettings {
  int size = 128;
  double gamma = 2.5;
  /// Gaussian predictor parameters on the display-scaled prior domain.
  double prior_mean = 0.5;
  double prior_stddev = 0.25;
  EnhanceConfig config = default_config();

  static EnhanceConfig default_config();
};

struct DemoReport {
  ImageBuffer clean;
  ImageBuffer dark;
  ImageBuffer output;
  SamplerTrace trace;
  double mean_luminance;
  double psnr_dark;
  double psnr_output;
  double ssim_dark;
  double ssim_output;
  double loe_output;
  double loe_control;
};

/// Darkens the synthetic scene, enhances it and scores the result.
DemoReport run_demo(const DemoSettings& settings);

}  // namespace wfp
