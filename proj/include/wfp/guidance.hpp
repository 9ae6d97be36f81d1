// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wfp/fourier.hpp"
#include "wfp/image.hpp"
#include "wfp/wavelet.hpp"

namespace wfp {

/// Fixed per-run prior bundle derived from the degraded input.
///
/// The sampler lives in the half-resolution approximation band of the
/// input, scaled by 1/2 so that its values stay on the input's own
/// [0, 1] display scale. Structure (detail bands, Fourier phase) always
/// comes from here; only the amplitude is allowed to follow the sample.
struct GuidancePriors {
  /// Level-1 decomposition of the input. ll holds L_L, the rest H_L.
  SubbandSet input_bands;
  /// 0.5 * L_L, the domain the sampler works in.
  ImageBuffer ll_scaled;
  /// Decomposition of ll_scaled. ll holds L_L^2, the rest H_L^2.
  SubbandSet ll_bands;
  /// Amplitude and phase of L_L^2.
  AmplitudePhase spectrum;

  const ImageBuffer& l_l2() const noexcept { return ll_bands.ll; }
};

/// Learnable brightness factor; never negative.
struct Theta {
  double value = 1.0;
};

struct PromptPair {
  std::string positive = "a bright, clear, well-exposed photo";
  std::string negative = "a dark, noisy, underexposed photo";
};

/// Black-box joint text/image embedder. Both methods return unit vectors
/// of a common dimension and must be deterministic.
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual std::vector<double> embed_image(const ImageBuffer& img) const = 0;
  virtual std::vector<double> embed_text(std::string_view prompt) const = 0;
};

/// Desk-scale scorer: soft 3-bin luminance histogram (dark, mid, bright)
/// padded to 8 dimensions. The default positive prompt maps to the bright
/// axis and the default negative prompt to the dark axis; any other prompt
/// maps to a hashed unit vector.
class MockScorer final : public SemanticScorer {
 public:
  static constexpr int kDimension = 8;

  std::vector<double> embed_image(const ImageBuffer& img) const override;
  std::vector<double> embed_text(std::string_view prompt) const override;
};

/// Throws SizeError when the input is smaller than 4x4.
GuidancePriors build_priors(const ImageBuffer& input);

/// Joint wavelet/Fourier correction of one sample:
///   L, H   = dwt2(x_t)            (H is discarded)
///   amp, _ = polar(fft2(L))       (phase is discarded)
///   out    = idwt2(ifft2_real(theta * amp + amp_L, pha_L), H_L^2)
/// Throws ShapeError unless x_t matches priors.ll_scaled.
ImageBuffer guided_update(const ImageBuffer& x_t, const GuidancePriors& priors,
                          Theta theta);

/// guided_update(x_t, theta) = theta * slope + offset, exactly up to
/// rounding. offset is the theta = 0 output.
struct AffineUpdate {
  ImageBuffer slope;
  ImageBuffer offset;
};
AffineUpdate guided_update_affine(const ImageBuffer& x_t,
                                  const GuidancePriors& priors);

/// Mean absolute deviation of 16x16 tile means of the channel-mean
/// luminance from e_level. Edge tiles use their actual pixel count. Model
/// tagged buffers are mapped to display with (x + 1) / 2 (no clamping);
/// display and unbounded buffers are used as is.
double brightness_loss(const ImageBuffer& img, double e_level);

inline constexpr int kBrightnessTile = 16;

/// d/dtheta of brightness_loss(guided_update(x_t, priors, theta), e_level).
/// sign(0) is taken as 0.
double theta_gradient(const ImageBuffer& x_t, const GuidancePriors& priors,
                      Theta theta, double e_level);

/// One projected gradient step: max(0, theta - lr * gradient).
Theta theta_step(const ImageBuffer& x_t, const GuidancePriors& priors,
                 Theta theta, double e_level, double lr);

/// exp(c_n) / (exp(c_p) + exp(c_n)).
double semantic_loss_from_cosines(double c_pos, double c_neg);

/// Semantic loss of one image. Throws ValidationError on a zero-norm
/// embedding.
double semantic_loss(const SemanticScorer& scorer, const ImageBuffer& img,
                     const PromptPair& prompts);

/// One finite-difference descent step on a global gain/bias applied to
/// img. weight = 0 returns img unchanged.
ImageBuffer apply_semantic_guidance(const ImageBuffer& img,
                                    const SemanticScorer& scorer,
                                    const PromptPair& prompts, double weight,
                                    double probe);

}  // namespace wfp
