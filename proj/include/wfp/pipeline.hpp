// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "wfp/diffusion.hpp"
#include "wfp/guidance.hpp"
#include "wfp/image.hpp"

namespace wfp {

enum class InitMode {
  noised_input,  // forward-diffuse the prior domain to step T
  pure_noise,    // start from a standard normal draw
};

/// Which sample the joint prior correction is applied to at each step.
enum class GuidanceSource {
  sample,    // the current noisy sample x_t
  denoised,  // the predictor's x0 estimate from x_t
};

struct EnhanceConfig {
  int steps = 1000;
  /// Semantic guidance fires when t is a multiple of this interval.
  int semantic_interval = 200;
  double theta_init = 1.0;
  /// 0 freezes theta at theta_init.
  double theta_lr = 0.1;
  double e_level = 0.6;
  /// 0 disables semantic guidance.
  double guidance_weight = 0.0;
  double guidance_probe = 0.05;
  PromptPair prompts;
  InitMode init_mode = InitMode::noised_input;
  GuidanceSource guidance_source = GuidanceSource::denoised;
  double denoise_strength = 0.0;
  std::uint64_t seed = 0;
  /// Schedule endpoints; unset means NoiseSchedule::scaled_linear(steps).
  std::optional<double> beta_start;
  std::optional<double> beta_end;

  /// Throws ParameterError on the first violated invariant.
  void validate() const;
  NoiseSchedule schedule() const;
};

struct TraceRecord {
  int t;
  double brightness_loss;
  std::optional<double> semantic_loss;
  double theta;
};

struct SamplerTrace {
  std::vector<TraceRecord> records;
};

/// CSV with header "t,brightness_loss,semantic_loss,theta"; semantic_loss
/// is empty on steps where it was not computed.
void write_trace_csv(const SamplerTrace& trace, std::ostream& out);

struct EnhanceResult {
  ImageBuffer image;
  SamplerTrace trace;
};

/// Full enhancement of a display-range input of at least 4x4. scorer may
/// be null only when guidance_weight = 0. Throws NumericError naming the
/// step when a non-finite value appears.
EnhanceResult enhance(const ImageBuffer& input, const EnhanceConfig& cfg,
                      const NoisePredictor& predictor,
                      const SemanticScorer* scorer);

/// Bilateral filter, radius 2, spatial sigma 1.5, range sigma = strength.
/// strength = 0 returns the input unchanged.
ImageBuffer post_denoise(const ImageBuffer& img, double strength);

}  // namespace wfp
