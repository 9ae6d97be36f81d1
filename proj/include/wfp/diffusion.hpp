// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <vector>

#include "wfp/image.hpp"
#include "wfp/rng.hpp"

namespace wfp {

/// Coefficients of one reverse transition t -> t-1.
struct StepCoefficients {
  double beta;
  double alpha;
  double alpha_bar;       // alpha_bar[t]
  double alpha_bar_prev;  // alpha_bar[t-1]
  double sigma2;          // posterior variance beta~_t
  // 1 - alpha_bar[t] and 1 - alpha_bar[t-1], accumulated without
  // cancellation so that at t = 1 they equal beta_1 and 0 exactly.
  double noise_var;
  double noise_var_prev;

  /// Coefficients from the four primary quantities, with sigma2 set to the
  /// posterior variance.
  static StepCoefficients from(double alpha, double alpha_bar,
                               double alpha_bar_prev);
};

/// Discrete noise schedule for t = 1..T with alpha_bar[0] = 1.
class NoiseSchedule {
 public:
  /// beta_t linearly interpolated from beta_first to beta_last.
  /// Requires T >= 1 and 0 < beta_first <= beta_last < 1.
  static NoiseSchedule linear(int steps, double beta_first, double beta_last);

  /// Linear schedule whose endpoints are 1e-4 and 0.02 rescaled by
  /// 1000 / T (capped below 1), so T = 1000 reproduces the usual DDPM
  /// schedule and shorter chains still end near pure noise.
  static NoiseSchedule scaled_linear(int steps);

  /// Arbitrary betas (index 0 holds beta_1). Each beta must lie in (0, 1)
  /// and the sequence must be non-decreasing.
  static NoiseSchedule from_betas(std::vector<double> betas);

  int steps() const noexcept { return static_cast<int>(beta_.size()); }
  double beta(int t) const { return beta_.at(t - 1); }
  double alpha(int t) const { return 1.0 - beta(t); }
  double alpha_bar(int t) const { return alpha_bar_.at(t); }
  double sigma2(int t) const { return sigma2_.at(t - 1); }
  /// 1 - alpha_bar[t] without cancellation.
  double noise_var(int t) const { return noise_var_.at(t); }

  /// Throws ParameterError unless 1 <= t <= T.
  StepCoefficients coefficients(int t) const;

 private:
  explicit NoiseSchedule(std::vector<double> betas);

  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
  std::vector<double> noise_var_;
  std::vector<double> sigma2_;
};

/// Forward marginal: sqrt(alpha_bar[t]) x0 + sqrt(1 - alpha_bar[t]) eps.
ImageBuffer q_sample(const ImageBuffer& x0, int t, const ImageBuffer& eps,
                     const NoiseSchedule& schedule);

/// Mean of the unguided reverse transition,
///   (x_t - beta / sqrt(1 - alpha_bar) eps_hat) / sqrt(alpha).
ImageBuffer unguided_mean(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          const StepCoefficients& k);

/// Unguided reverse step: mean plus sqrt(sigma2) z. No variates are drawn
/// when sigma2 = 0.
ImageBuffer unguided_step(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          const StepCoefficients& k, Rng& rng);
ImageBuffer unguided_step(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          int t, const NoiseSchedule& schedule, Rng& rng);

/// Posterior mean of the guided transition, mixing the corrected sample
/// x_t1 (weighted like x0) with the current sample x_t.
ImageBuffer guided_mean(const ImageBuffer& x_t, const ImageBuffer& x_t1,
                        const StepCoefficients& k);

ImageBuffer guided_step(const ImageBuffer& x_t, const ImageBuffer& x_t1,
                        const StepCoefficients& k, Rng& rng);
ImageBuffer guided_step(const ImageBuffer& x_t, const ImageBuffer& x_t1, int t,
                        const NoiseSchedule& schedule, Rng& rng);

/// x0 estimate implied by a noise prediction:
///   (x_t - sqrt(1 - alpha_bar) eps) / sqrt(alpha_bar).
ImageBuffer predict_x0(const ImageBuffer& x_t, const ImageBuffer& eps, int t,
                       const NoiseSchedule& schedule);

/// Noise predictor epsilon(x_t, t). Implementations must be deterministic
/// and safe for concurrent const use.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual ImageBuffer predict(const ImageBuffer& x_t, int t,
                              const NoiseSchedule& schedule) const = 0;
};

/// Exact MMSE noise for x0 ~ Normal(m, s^2) per sample. Throws
/// ParameterError for t = 0 or s < 0.
ImageBuffer gaussian_prior_eps(const ImageBuffer& x_t, int t, double m,
                               double s, const NoiseSchedule& schedule);

class GaussianPriorPredictor final : public NoisePredictor {
 public:
  GaussianPriorPredictor(double m, double s);
  ImageBuffer predict(const ImageBuffer& x_t, int t,
                      const NoiseSchedule& schedule) const override;
  double mean() const noexcept { return m_; }
  double stddev() const noexcept { return s_; }

 private:
  double m_;
  double s_;
};

}  // namespace wfp
