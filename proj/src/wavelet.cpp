// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/wavelet.hpp"

#include <algorithm>
#include <utility>

#include <fmt/format.h>

#include "wfp/error.hpp"

namespace wfp {

SubbandSet SubbandSet::with_ll(ImageBuffer new_ll) const {
  SubbandSet out = *this;
  out.ll = std::move(new_ll);
  return out;
}

SubbandSet dwt2(const ImageBuffer& img) {
  const int height = img.height();
  const int width = img.width();
  if (height < 2 || width < 2) {
    throw SizeError(fmt::format("dwt2 needs at least 2x2, got {}x{}", height,
                                width));
  }
  const int half_h = (height + 1) / 2;
  const int half_w = (width + 1) / 2;
  const int channels = img.channels();

  SubbandSet out{ImageBuffer(half_h, half_w, channels),
                 ImageBuffer(half_h, half_w, channels),
                 ImageBuffer(half_h, half_w, channels),
                 ImageBuffer(half_h, half_w, channels), height, width};

  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < half_h; ++i) {
      const int y0 = 2 * i;
      const int y1 = std::min(2 * i + 1, height - 1);
      for (int j = 0; j < half_w; ++j) {
        const int x0 = 2 * j;
        const int x1 = std::min(2 * j + 1, width - 1);
        const double a = img(c, y0, x0);
        const double b = img(c, y0, x1);
        const double cc = img(c, y1, x0);
        const double d = img(c, y1, x1);
        out.ll(c, i, j) = 0.5 * (a + b + cc + d);
        out.hl(c, i, j) = 0.5 * (a - b + cc - d);
        out.lh(c, i, j) = 0.5 * (a + b - cc - d);
        out.hh(c, i, j) = 0.5 * (a - b - cc + d);
      }
    }
  }
  return out;
}

ImageBuffer idwt2(const SubbandSet& bands) {
  const ImageBuffer& ll = bands.ll;
  if (!ll.same_shape(bands.lh) || !ll.same_shape(bands.hl) ||
      !ll.same_shape(bands.hh)) {
    throw ShapeError("idwt2: subbands have mismatched shapes");
  }
  const int height = bands.source_height;
  const int width = bands.source_width;
  if ((height + 1) / 2 != ll.height() || (width + 1) / 2 != ll.width() ||
      height < 2 || width < 2) {
    throw ShapeError(fmt::format(
        "idwt2: {}x{} subbands cannot reconstruct a {}x{} image", ll.height(),
        ll.width(), height, width));
  }

  ImageBuffer out(height, width, ll.channels());
  for (int c = 0; c < ll.channels(); ++c) {
    for (int i = 0; i < ll.height(); ++i) {
      for (int j = 0; j < ll.width(); ++j) {
        const double s = bands.ll(c, i, j);
        const double h = bands.hl(c, i, j);
        const double v = bands.lh(c, i, j);
        const double d = bands.hh(c, i, j);
        const int y0 = 2 * i;
        const int x0 = 2 * j;
        out(c, y0, x0) = 0.5 * (s + h + v + d);
        if (x0 + 1 < width) out(c, y0, x0 + 1) = 0.5 * (s - h + v - d);
        if (y0 + 1 < height) {
          out(c, y0 + 1, x0) = 0.5 * (s + h - v - d);
          if (x0 + 1 < width) out(c, y0 + 1, x0 + 1) = 0.5 * (s - h - v + d);
        }
      }
    }
  }
  return out;
}

}  // namespace wfp
