// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <filesystem>

#include "wfp/image.hpp"

namespace wfp {

/// Reads an 8-bit PNG (gray or RGB; alpha is dropped) or a PFM raster,
/// chosen by extension. PNG samples map v -> v / 255. PFM samples are kept
/// as stored; the buffer is tagged display when every sample lies in
/// [0, 1] and unbounded otherwise.
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes a display-range buffer as 8-bit PNG (round to nearest) or PFM
/// (exact float32), chosen by extension.
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

/// Writes any buffer as little-endian PFM regardless of its range tag.
/// Used for intermediate products such as wavelet subbands.
void write_pfm(const ImageBuffer& img, const std::filesystem::path& path);

}  // namespace wfp
