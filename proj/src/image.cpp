// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "wfp/error.hpp"

namespace wfp {

namespace {

void check_range(std::span<const double> samples, RangeTag tag) {
  double lo = 0.0;
  double hi = 1.0;
  switch (tag) {
    case RangeTag::display:
      break;
    case RangeTag::model:
      lo = -1.0;
      break;
    case RangeTag::unbounded:
      return;
  }
  for (double v : samples) {
    if (!(v >= lo && v <= hi)) {
      throw ContractError(fmt::format("sample {} outside the {} range [{}, {}]",
                                      v, to_string(tag), lo, hi));
    }
  }
}

}  // namespace

std::string_view to_string(RangeTag tag) {
  switch (tag) {
    case RangeTag::display:
      return "display";
    case RangeTag::model:
      return "model";
    case RangeTag::unbounded:
      return "unbounded";
  }
  return "unknown";
}

ImageBuffer::ImageBuffer(int height, int width, int channels, RangeTag tag)
    : height_(height), width_(width), channels_(channels), tag_(tag) {
  if (height < 1 || width < 1) {
    throw SizeError(fmt::format("image must be at least 1x1, got {}x{}",
                                height, width));
  }
  if (channels != 1 && channels != 3) {
    throw ShapeError(fmt::format("channel count must be 1 or 3, got {}",
                                 channels));
  }
  samples_.assign(plane_size() * static_cast<std::size_t>(channels), 0.0);
}

ImageBuffer::ImageBuffer(int height, int width, int channels,
                         std::vector<double> samples, RangeTag tag)
    : ImageBuffer(height, width, channels, RangeTag::unbounded) {
  if (samples.size() != samples_.size()) {
    throw ShapeError(fmt::format("expected {} samples for {}x{}x{}, got {}",
                                 samples_.size(), height, width, channels,
                                 samples.size()));
  }
  check_range(samples, tag);
  samples_ = std::move(samples);
  tag_ = tag;
}

void ImageBuffer::retag(RangeTag tag) {
  check_range(samples_, tag);
  tag_ = tag;
}

ImageBuffer convert_range(const ImageBuffer& img, RangeTag target) {
  if (img.tag() == RangeTag::unbounded) {
    throw ContractError("convert_range: unbounded source has no defined range");
  }
  if (target == RangeTag::unbounded) {
    throw ContractError("convert_range: target must be display or model");
  }
  if (img.tag() == target) return img;

  ImageBuffer out(img.height(), img.width(), img.channels());
  auto src = img.samples();
  auto dst = out.samples();
  if (target == RangeTag::model) {
    std::transform(src.begin(), src.end(), dst.begin(),
                   [](double v) { return 2.0 * v - 1.0; });
    out.retag(RangeTag::model);
  } else {
    std::transform(src.begin(), src.end(), dst.begin(), [](double v) {
      return std::clamp((v + 1.0) * 0.5, 0.0, 1.0);
    });
    out.retag(RangeTag::display);
  }
  return out;
}

ImageBuffer luminance(const ImageBuffer& img, LuminanceMode mode) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.height(), img.width(), 1);
  auto dst = out.samples();
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = mode == LuminanceMode::channel_mean
                 ? (r[i] + g[i] + b[i]) / 3.0
                 : std::max({r[i], g[i], b[i]});
  }
  // Mean and max stay inside the source's value interval.
  out.retag(img.tag());
  return out;
}

ImageBuffer clamp_to_display(const ImageBuffer& img) {
  ImageBuffer out(img.height(), img.width(), img.channels());
  std::transform(img.samples().begin(), img.samples().end(),
                 out.samples().begin(),
                 [](double v) { return std::clamp(v, 0.0, 1.0); });
  out.retag(RangeTag::display);
  return out;
}

ImageBuffer affine(const ImageBuffer& img, double gain, double bias) {
  ImageBuffer out(img.height(), img.width(), img.channels());
  std::transform(img.samples().begin(), img.samples().end(),
                 out.samples().begin(),
                 [=](double v) { return gain * v + bias; });
  return out;
}

ImageBuffer add(const ImageBuffer& lhs, const ImageBuffer& rhs) {
  if (!lhs.same_shape(rhs)) throw ShapeError("add: shape mismatch");
  ImageBuffer out(lhs.height(), lhs.width(), lhs.channels());
  std::transform(lhs.samples().begin(), lhs.samples().end(),
                 rhs.samples().begin(), out.samples().begin(), std::plus<>{});
  return out;
}

bool all_finite(const ImageBuffer& img) {
  return std::all_of(img.samples().begin(), img.samples().end(),
                     [](double v) { return std::isfinite(v); });
}

double mean(const ImageBuffer& img) {
  const auto s = img.samples();
  return std::accumulate(s.begin(), s.end(), 0.0) /
         static_cast<double>(s.size());
}

}  // namespace wfp
