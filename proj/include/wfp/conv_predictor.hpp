// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wfp/diffusion.hpp"

namespace wfp {

inline constexpr int kPredictorHidden = 32;

/// One 3x3 convolution. Filters are laid out [out][in][ky][kx].
struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  std::vector<float> filters;
  std::vector<float> bias;
};

/// Weights of the three-layer time-conditioned convolutional predictor:
///   conv C->32, SiLU, conv 32->32 + time bias, SiLU, conv 32->C
/// where time bias = time_matrix * embed(t) + time_bias.
struct ConvPredictorWeights {
  int channels = 0;
  int hidden = kPredictorHidden;
  std::array<ConvLayer, 3> layers;
  std::vector<float> time_matrix;  // hidden x hidden, row-major
  std::vector<float> time_bias;    // hidden

  /// All-zero weights with consistent dimensions.
  static ConvPredictorWeights zeros(int channels);
  /// Uniform(-scale, scale) coefficients drawn from a seeded stream.
  static ConvPredictorWeights random(int channels, std::uint64_t seed,
                                     double scale);
};

/// Parses the "WFDP" v1 little-endian weight format. Throws FormatError on
/// a bad header or truncated payload and ValidationError on inconsistent
/// dimensions or non-finite coefficients.
ConvPredictorWeights load_predictor_weights(std::span<const std::uint8_t> bytes);
ConvPredictorWeights load_predictor_weights(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_predictor_weights(
    const ConvPredictorWeights& w);

/// 32-dimensional sinusoidal embedding of the normalized step t / T.
std::array<double, kPredictorHidden> time_embedding(int t, int steps);

/// Runs the network with reflect padding. Output has the input's shape.
ImageBuffer conv_predictor_forward(const ConvPredictorWeights& w,
                                   const ImageBuffer& x_t, int t,
                                   const NoiseSchedule& schedule);

class ConvPredictor final : public NoisePredictor {
 public:
  explicit ConvPredictor(ConvPredictorWeights weights);
  ImageBuffer predict(const ImageBuffer& x_t, int t,
                      const NoiseSchedule& schedule) const override;

 private:
  ConvPredictorWeights weights_;
};

/// Reflect an index into [0, n) without repeating the edge sample
/// (-1 -> 1, n -> n - 2). n = 1 always maps to 0.
int reflect_index(int i, int n);

}  // namespace wfp
