// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "wfp/error.hpp"
#include "wfp/rng.hpp"

namespace wfp {

namespace {

/// Display-scale channel-mean luminance plane.
ImageBuffer display_luminance(const ImageBuffer& img) {
  ImageBuffer lum = luminance(img, LuminanceMode::channel_mean);
  if (lum.tag() == RangeTag::model) {
    lum = affine(lum, 0.5, 0.5);
  }
  return lum;
}

/// Means of the non-overlapping tiles of a single-channel plane, in
/// row-major tile order.
std::vector<double> tile_means(const ImageBuffer& plane, int tile) {
  std::vector<double> means;
  for (int y0 = 0; y0 < plane.height(); y0 += tile) {
    const int y1 = std::min(y0 + tile, plane.height());
    for (int x0 = 0; x0 < plane.width(); x0 += tile) {
      const int x1 = std::min(x0 + tile, plane.width());
      double sum = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += plane(0, y, x);
      }
      means.push_back(sum / static_cast<double>((y1 - y0) * (x1 - x0)));
    }
  }
  return means;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void require_sample_shape(const ImageBuffer& x_t, const GuidancePriors& priors) {
  if (!x_t.same_shape(priors.ll_scaled)) {
    throw ShapeError(fmt::format(
        "guided_update: sample is {}x{}x{} but the prior domain is {}x{}x{}",
        x_t.height(), x_t.width(), x_t.channels(), priors.ll_scaled.height(),
        priors.ll_scaled.width(), priors.ll_scaled.channels()));
  }
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ValidationError("semantic embeddings differ in dimension");
  }
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw ValidationError("semantic embedding has zero norm");
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb);
}

}  // namespace

GuidancePriors build_priors(const ImageBuffer& input) {
  if (input.height() < 4 || input.width() < 4) {
    throw SizeError(fmt::format("priors need at least 4x4 input, got {}x{}",
                                input.height(), input.width()));
  }
  if (input.tag() != RangeTag::display) {
    throw ContractError("build_priors expects a display-range input");
  }
  SubbandSet input_bands = dwt2(input);
  ImageBuffer ll_scaled = affine(input_bands.ll, 0.5, 0.0);
  ll_scaled.retag(RangeTag::display);
  SubbandSet ll_bands = dwt2(ll_scaled);
  AmplitudePhase spectrum = amp_phase(fft2(ll_bands.ll));
  return {std::move(input_bands), std::move(ll_scaled), std::move(ll_bands),
          std::move(spectrum)};
}

ImageBuffer guided_update(const ImageBuffer& x_t, const GuidancePriors& priors,
                          Theta theta) {
  require_sample_shape(x_t, priors);
  const AmplitudePhase sample = amp_phase(fft2(dwt2(x_t).ll));
  AmplitudePhase mixed = priors.spectrum;
  for (std::size_t i = 0; i < mixed.amp.size(); ++i) {
    mixed.amp[i] = theta.value * sample.amp[i] + priors.spectrum.amp[i];
  }
  return idwt2(priors.ll_bands.with_ll(ifft2_real(recompose(mixed))));
}

AffineUpdate guided_update_affine(const ImageBuffer& x_t,
                                  const GuidancePriors& priors) {
  require_sample_shape(x_t, priors);
  AmplitudePhase sample = amp_phase(fft2(dwt2(x_t).ll));
  sample.pha = priors.spectrum.pha;
  const ImageBuffer ll = ifft2_real(recompose(sample));

  SubbandSet zero_details = priors.ll_bands;
  for (ImageBuffer* band :
       {&zero_details.lh, &zero_details.hl, &zero_details.hh}) {
    std::fill(band->samples().begin(), band->samples().end(), 0.0);
  }
  ImageBuffer slope = idwt2(zero_details.with_ll(ll));
  ImageBuffer offset =
      idwt2(priors.ll_bands.with_ll(ifft2_real(recompose(priors.spectrum))));
  return {std::move(slope), std::move(offset)};
}

double brightness_loss(const ImageBuffer& img, double e_level) {
  const std::vector<double> means =
      tile_means(display_luminance(img), kBrightnessTile);
  double total = 0.0;
  for (double m : means) total += std::abs(m - e_level);
  return total / static_cast<double>(means.size());
}

double theta_gradient(const ImageBuffer& x_t, const GuidancePriors& priors,
                      Theta theta, double e_level) {
  const AffineUpdate update = guided_update_affine(x_t, priors);
  const ImageBuffer current =
      add(affine(update.slope, theta.value, 0.0), update.offset);
  // The sampler domain is display-scaled, so the luminance map has unit
  // slope with respect to the sample.
  const std::vector<double> level =
      tile_means(display_luminance(current), kBrightnessTile);
  const std::vector<double> direction = tile_means(
      luminance(update.slope, LuminanceMode::channel_mean), kBrightnessTile);
  double grad = 0.0;
  for (std::size_t n = 0; n < level.size(); ++n) {
    grad += sign(level[n] - e_level) * direction[n];
  }
  return grad / static_cast<double>(level.size());
}

Theta theta_step(const ImageBuffer& x_t, const GuidancePriors& priors,
                 Theta theta, double e_level, double lr) {
  if (!(lr > 0.0)) {
    throw ParameterError(fmt::format("theta_step: lr must be > 0, got {}", lr));
  }
  const double grad = theta_gradient(x_t, priors, theta, e_level);
  return Theta{std::max(0.0, theta.value - lr * grad)};
}

std::vector<double> MockScorer::embed_image(const ImageBuffer& img) const {
  constexpr double kCenters[3] = {1.0 / 6.0, 0.5, 5.0 / 6.0};
  constexpr double kWidth = 1.0 / 6.0;
  const ImageBuffer lum = display_luminance(img);
  std::vector<double> features(kDimension, 0.0);
  for (double v : lum.samples()) {
    double w[3];
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double d = (v - kCenters[k]) / kWidth;
      w[k] = std::exp(-0.5 * d * d);
      total += w[k];
    }
    if (total == 0.0) {
      // Far outside [0, 1]: hard-assign to the nearest end bin.
      features[v < 0.5 ? 0 : 2] += 1.0;
      continue;
    }
    for (int k = 0; k < 3; ++k) features[k] += w[k] / total;
  }
  const double n = norm(features);
  for (double& f : features) f /= n;
  return features;
}

std::vector<double> MockScorer::embed_text(std::string_view prompt) const {
  std::vector<double> out(kDimension, 0.0);
  const PromptPair defaults;
  if (prompt == defaults.positive) {
    out[2] = 1.0;
    return out;
  }
  if (prompt == defaults.negative) {
    out[0] = 1.0;
    return out;
  }
  Rng rng(derive_seed(0, prompt));
  for (double& v : out) v = rng.normal();
  const double n = norm(out);
  for (double& v : out) v /= n;
  return out;
}

double semantic_loss_from_cosines(double c_pos, double c_neg) {
  // Shifted softmax; identical to exp(c_n) / (exp(c_p) + exp(c_n)).
  return 1.0 / (1.0 + std::exp(c_pos - c_neg));
}

double semantic_loss(const SemanticScorer& scorer, const ImageBuffer& img,
                     const PromptPair& prompts) {
  const std::vector<double> image = scorer.embed_image(img);
  const double c_pos = cosine(image, scorer.embed_text(prompts.positive));
  const double c_neg = cosine(image, scorer.embed_text(prompts.negative));
  return semantic_loss_from_cosines(c_pos, c_neg);
}

ImageBuffer apply_semantic_guidance(const ImageBuffer& img,
                                    const SemanticScorer& scorer,
                                    const PromptPair& prompts, double weight,
                                    double probe) {
  if (!(weight >= 0.0)) {
    throw ParameterError(fmt::format("guidance weight {} < 0", weight));
  }
  if (!(probe > 0.0)) {
    throw ParameterError(fmt::format("guidance probe {} must be > 0", probe));
  }
  if (weight == 0.0) return img;
  if (img.tag() == RangeTag::model) {
    throw ContractError("semantic guidance works on display-scaled buffers");
  }
  auto loss = [&](double gain, double bias) {
    return semantic_loss(scorer, affine(img, gain, bias), prompts);
  };
  const double d_gain = (loss(1.0 + probe, 0.0) - loss(1.0 - probe, 0.0)) /
                        (2.0 * probe);
  const double d_bias = (loss(1.0, probe) - loss(1.0, -probe)) / (2.0 * probe);
  return affine(img, 1.0 - weight * d_gain, -weight * d_bias);
}

}  // namespace wfp
