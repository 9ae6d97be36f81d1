// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wfp {

/// Value-range convention attached to every buffer.
///   display   : samples in [0, 1]
///   model     : samples in [-1, 1]
///   unbounded : no constraint; interpreted on the display scale
enum class RangeTag { display, model, unbounded };

std::string_view to_string(RangeTag tag);

enum class LuminanceMode { channel_mean, channel_max };

/// Planar real-valued raster. Samples are stored channel-major, row-major
/// within a channel. The display/model range invariant is checked when a
/// buffer is constructed with samples; mutating accessors do not re-check.
class ImageBuffer {
 public:
  /// Zero-filled buffer.
  ImageBuffer(int height, int width, int channels,
              RangeTag tag = RangeTag::unbounded);
  ImageBuffer(int height, int width, int channels, std::vector<double> samples,
              RangeTag tag);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  RangeTag tag() const noexcept { return tag_; }

  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const noexcept { return samples_.size(); }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> plane(int c) const noexcept {
    return std::span<const double>(samples_).subspan(c * plane_size(),
                                                     plane_size());
  }
  std::span<double> plane(int c) noexcept {
    return std::span<double>(samples_).subspan(c * plane_size(), plane_size());
  }

  double operator()(int c, int y, int x) const noexcept {
    return samples_[index(c, y, x)];
  }
  double& operator()(int c, int y, int x) noexcept {
    return samples_[index(c, y, x)];
  }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  /// Replaces the tag without touching samples. Throws ContractError when
  /// the samples do not satisfy the new tag's range.
  void retag(RangeTag tag);

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int height_;
  int width_;
  int channels_;
  RangeTag tag_;
  std::vector<double> samples_;
};

/// display -> model: x -> 2x - 1; model -> display: clamp((x + 1) / 2).
/// Same tag is the identity. Unbounded sources are rejected.
ImageBuffer convert_range(const ImageBuffer& img, RangeTag target);

/// Single-channel luminance plane. One-channel inputs pass through.
ImageBuffer luminance(const ImageBuffer& img, LuminanceMode mode);

/// Clamp every sample into [0, 1] and tag the result display.
ImageBuffer clamp_to_display(const ImageBuffer& img);

/// Elementwise a * x + b; the result is tagged unbounded.
ImageBuffer affine(const ImageBuffer& img, double gain, double bias);

/// Sum of the two buffers (same shape); the result is tagged unbounded.
ImageBuffer add(const ImageBuffer& lhs, const ImageBuffer& rhs);

bool all_finite(const ImageBuffer& img);

double mean(const ImageBuffer& img);

}  // namespace wfp
