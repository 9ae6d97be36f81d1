// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <optional>

#include "wfp/image.hpp"

namespace wfp {

inline constexpr double kPsnrCap = 99.0;

struct MetricReport {
  double psnr;
  double ssim;
  std::optional<double> loe;
};

/// 10 log10(1 / MSE) with unit peak; identical images give kPsnrCap.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

/// Mean SSIM over valid positions of an 11x11 Gaussian window (sigma 1.5)
/// on the channel-mean luminance, C1 = 0.01^2, C2 = 0.03^2.
/// Throws SizeError for images smaller than the window.
double ssim(const ImageBuffer& a, const ImageBuffer& b);

/// Lightness order error on channel-max luminance, after nearest-neighbour
/// downsampling so that min(H, W) = 50 (smaller images are used as is).
double loe(const ImageBuffer& original, const ImageBuffer& enhanced);

/// Nearest-neighbour downsampling used by loe; exposed for testing.
ImageBuffer loe_downsample(const ImageBuffer& plane);

}  // namespace wfp
