// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "wfp/image.hpp"

namespace wfp {

/// Seeded 64-bit generator with a pinned normal transform.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// normal_distribution is not, so normals are drawn with Box-Muller on top
/// of it. Both values of each Box-Muller pair are used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal.
  double normal();
  /// Image of independent standard normals, tagged unbounded.
  ImageBuffer normal_image(int height, int width, int channels);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Stream seed for one named item of a batch run (splitmix64 of the seed
/// mixed with an FNV-1a hash of the name).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

}  // namespace wfp
