// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/pipeline.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "wfp/conv_predictor.hpp"
#include "wfp/error.hpp"
#include "wfp/rng.hpp"
#include "wfp/wavelet.hpp"

namespace wfp {

void EnhanceConfig::validate() const {
  if (steps < 1) {
    throw ParameterError(fmt::format("T must be >= 1, got {}", steps));
  }
  if (semantic_interval < 1 || semantic_interval > steps) {
    throw ParameterError(fmt::format("S must satisfy 1 <= S <= T, got S={} T={}",
                                     semantic_interval, steps));
  }
  if (!(e_level >= 0.0 && e_level <= 1.0)) {
    throw ParameterError(fmt::format("e_level {} outside [0, 1]", e_level));
  }
  if (!(theta_init >= 0.0) || !std::isfinite(theta_init)) {
    throw ParameterError(fmt::format("theta_init {} must be >= 0", theta_init));
  }
  if (!(theta_lr >= 0.0) || !std::isfinite(theta_lr)) {
    throw ParameterError(fmt::format("theta_lr {} must be >= 0", theta_lr));
  }
  if (!(guidance_weight >= 0.0) || !std::isfinite(guidance_weight)) {
    throw ParameterError(
        fmt::format("guidance_weight {} must be >= 0", guidance_weight));
  }
  if (!(guidance_probe > 0.0) || !std::isfinite(guidance_probe)) {
    throw ParameterError(
        fmt::format("guidance_probe {} must be > 0", guidance_probe));
  }
  if (!(denoise_strength >= 0.0) || !std::isfinite(denoise_strength)) {
    throw ParameterError(
        fmt::format("denoise_strength {} must be >= 0", denoise_strength));
  }
  if (prompts.positive.empty() || prompts.negative.empty()) {
    throw ParameterError("prompts must be non-empty");
  }
  if (beta_start.has_value() != beta_end.has_value()) {
    throw ParameterError("beta_start and beta_end must be given together");
  }
  schedule();
}

NoiseSchedule EnhanceConfig::schedule() const {
  if (beta_start && beta_end) {
    return NoiseSchedule::linear(steps, *beta_start, *beta_end);
  }
  return NoiseSchedule::scaled_linear(steps);
}

void write_trace_csv(const SamplerTrace& trace, std::ostream& out) {
  out << "t,brightness_loss,semantic_loss,theta\n";
  for (const TraceRecord& r : trace.records) {
    out << fmt::format("{},{},{},{}\n", r.t, r.brightness_loss,
                       r.semantic_loss ? fmt::format("{}", *r.semantic_loss)
                                       : std::string(),
                       r.theta);
  }
}

EnhanceResult enhance(const ImageBuffer& input, const EnhanceConfig& cfg,
                      const NoisePredictor& predictor,
                      const SemanticScorer* scorer) {
  cfg.validate();
  if (input.tag() != RangeTag::display) {
    throw ContractError("enhance expects a display-range input");
  }
  if (cfg.guidance_weight > 0.0 && scorer == nullptr) {
    throw ContractError("semantic guidance is enabled but no scorer is set");
  }

  const GuidancePriors priors = build_priors(input);
  const NoiseSchedule schedule = cfg.schedule();
  const int steps = schedule.steps();
  Rng rng(cfg.seed);

  const ImageBuffer& domain = priors.ll_scaled;
  ImageBuffer x = rng.normal_image(domain.height(), domain.width(),
                                   domain.channels());
  if (cfg.init_mode == InitMode::noised_input) {
    x = q_sample(domain, steps, x, schedule);
  }

  Theta theta{cfg.theta_init};
  SamplerTrace trace;
  trace.records.reserve(steps);
  for (int t = steps; t >= 1; --t) {
    const ImageBuffer source =
        cfg.guidance_source == GuidanceSource::denoised
            ? predict_x0(x, predictor.predict(x, t, schedule), t, schedule)
            : x;
    ImageBuffer x_t1 = guided_update(source, priors, theta);
    TraceRecord record{t, brightness_loss(x_t1, cfg.e_level), std::nullopt,
                       theta.value};
    if (cfg.theta_lr > 0.0) {
      theta = theta_step(source, priors, theta, cfg.e_level, cfg.theta_lr);
    }
    if (cfg.guidance_weight > 0.0 && t % cfg.semantic_interval == 0) {
      x_t1 = apply_semantic_guidance(x_t1, *scorer, cfg.prompts,
                                     cfg.guidance_weight, cfg.guidance_probe);
      record.semantic_loss = semantic_loss(*scorer, x_t1, cfg.prompts);
    }
    x = guided_step(x, x_t1, t, schedule, rng);
    if (!all_finite(x) || !std::isfinite(theta.value)) {
      throw NumericError(fmt::format("non-finite sample at step {}", t), t);
    }
    trace.records.push_back(record);
  }

  // Undo the 1/2 domain scaling and restore the input's detail bands.
  const ImageBuffer restored =
      idwt2(priors.input_bands.with_ll(affine(x, 2.0, 0.0)));
  return {post_denoise(clamp_to_display(restored), cfg.denoise_strength),
          std::move(trace)};
}

ImageBuffer post_denoise(const ImageBuffer& img, double strength) {
  if (img.tag() != RangeTag::display) {
    throw ContractError("post_denoise expects a display-range input");
  }
  if (!(strength >= 0.0)) {
    throw ParameterError(fmt::format("denoise strength {} < 0", strength));
  }
  if (strength == 0.0) return img;

  constexpr int kRadius = 2;
  constexpr double kSpatialSigma = 1.5;
  constexpr int kTaps = 2 * kRadius + 1;
  std::array<double, kTaps * kTaps> spatial{};
  for (int dy = -kRadius; dy <= kRadius; ++dy) {
    for (int dx = -kRadius; dx <= kRadius; ++dx) {
      spatial[(dy + kRadius) * kTaps + dx + kRadius] =
          std::exp(-(dy * dy + dx * dx) / (2.0 * kSpatialSigma * kSpatialSigma));
    }
  }
  const double range_scale = -1.0 / (2.0 * strength * strength);

  ImageBuffer out(img.height(), img.width(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const double center = img(c, y, x);
        double num = 0.0;
        double den = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          const int sy = reflect_index(y + dy, img.height());
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const int sx = reflect_index(x + dx, img.width());
            const double v = img(c, sy, sx);
            const double diff = v - center;
            const double w = spatial[(dy + kRadius) * kTaps + dx + kRadius] *
                             std::exp(range_scale * diff * diff);
            num += w * v;
            den += w;
          }
        }
        out(c, y, x) = num / den;
      }
    }
  }
  return clamp_to_display(out);
}

}  // namespace wfp
