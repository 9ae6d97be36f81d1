// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "wfp/error.hpp"

namespace wfp {

NoiseSchedule::NoiseSchedule(std::vector<double> betas)
    : beta_(std::move(betas)) {
  const int steps = static_cast<int>(beta_.size());
  alpha_bar_.resize(steps + 1);
  noise_var_.resize(steps + 1);
  sigma2_.resize(steps);
  alpha_bar_[0] = 1.0;
  noise_var_[0] = 0.0;
  for (int t = 1; t <= steps; ++t) {
    const double beta = beta_[t - 1];
    alpha_bar_[t] = alpha_bar_[t - 1] * (1.0 - beta);
    noise_var_[t] = noise_var_[t - 1] + alpha_bar_[t - 1] * beta;
    sigma2_[t - 1] = beta * noise_var_[t - 1] / noise_var_[t];
  }
}

StepCoefficients StepCoefficients::from(double alpha, double alpha_bar,
                                        double alpha_bar_prev) {
  const double beta = 1.0 - alpha;
  return {beta,
          alpha,
          alpha_bar,
          alpha_bar_prev,
          beta * (1.0 - alpha_bar_prev) / (1.0 - alpha_bar),
          1.0 - alpha_bar,
          1.0 - alpha_bar_prev};
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_first,
                                    double beta_last) {
  if (steps < 1) {
    throw ParameterError(fmt::format("schedule needs T >= 1, got {}", steps));
  }
  if (!(beta_first > 0.0 && beta_first <= beta_last && beta_last < 1.0)) {
    throw ParameterError(fmt::format(
        "schedule endpoints must satisfy 0 < {} <= {} < 1", beta_first,
        beta_last));
  }
  std::vector<double> betas(steps);
  for (int i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    betas[i] = beta_first + (beta_last - beta_first) * frac;
  }
  // Rounding in the interpolation must not break monotonicity.
  for (int i = 1; i < steps; ++i) betas[i] = std::max(betas[i], betas[i - 1]);
  return NoiseSchedule(std::move(betas));
}

NoiseSchedule NoiseSchedule::scaled_linear(int steps) {
  if (steps < 1) {
    throw ParameterError(fmt::format("schedule needs T >= 1, got {}", steps));
  }
  const double scale = 1000.0 / steps;
  const double last = std::min(0.02 * scale, 0.999);
  const double first = std::min(1e-4 * scale, last);
  return linear(steps, first, last);
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
  if (betas.empty()) throw ParameterError("schedule needs at least one beta");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0 && betas[i] < 1.0)) {
      throw ParameterError(fmt::format("beta[{}] = {} outside (0, 1)", i + 1,
                                       betas[i]));
    }
    if (i > 0 && betas[i] < betas[i - 1]) {
      throw ParameterError("betas must be non-decreasing");
    }
  }
  return NoiseSchedule(std::move(betas));
}

StepCoefficients NoiseSchedule::coefficients(int t) const {
  if (t < 1 || t > steps()) {
    throw ParameterError(fmt::format("step {} outside [1, {}]", t, steps()));
  }
  return {beta(t),      alpha(t),         alpha_bar(t), alpha_bar(t - 1),
          sigma2(t),    noise_var_[t],    noise_var_[t - 1]};
}

namespace {

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(fmt::format("{}: {}x{}x{} vs {}x{}x{}", op, a.height(),
                                 a.width(), a.channels(), b.height(),
                                 b.width(), b.channels()));
  }
}

ImageBuffer combine(const ImageBuffer& a, double wa, const ImageBuffer& b,
                    double wb) {
  ImageBuffer out(a.height(), a.width(), a.channels());
  auto dst = out.samples();
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = wa * sa[i] + wb * sb[i];
  return out;
}

void add_noise(ImageBuffer& mean, double sigma2, Rng& rng) {
  if (sigma2 <= 0.0) return;
  const double sigma = std::sqrt(sigma2);
  for (double& v : mean.samples()) v += sigma * rng.normal();
}

}  // namespace

ImageBuffer q_sample(const ImageBuffer& x0, int t, const ImageBuffer& eps,
                     const NoiseSchedule& schedule) {
  require_same_shape(x0, eps, "q_sample");
  if (t < 0 || t > schedule.steps()) {
    throw ParameterError(fmt::format("q_sample: step {} outside [0, {}]", t,
                                     schedule.steps()));
  }
  if (t == 0) {
    ImageBuffer out = x0;
    out.retag(RangeTag::unbounded);
    return out;
  }
  return combine(x0, std::sqrt(schedule.alpha_bar(t)), eps,
                 std::sqrt(schedule.noise_var(t)));
}

ImageBuffer unguided_mean(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          const StepCoefficients& k) {
  require_same_shape(x_t, eps_hat, "unguided_step");
  const double inv = 1.0 / std::sqrt(k.alpha);
  return combine(x_t, inv, eps_hat,
                 -inv * k.beta / std::sqrt(k.noise_var));
}

ImageBuffer unguided_step(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          const StepCoefficients& k, Rng& rng) {
  ImageBuffer out = unguided_mean(x_t, eps_hat, k);
  add_noise(out, k.sigma2, rng);
  return out;
}

ImageBuffer unguided_step(const ImageBuffer& x_t, const ImageBuffer& eps_hat,
                          int t, const NoiseSchedule& schedule, Rng& rng) {
  return unguided_step(x_t, eps_hat, schedule.coefficients(t), rng);
}

ImageBuffer guided_mean(const ImageBuffer& x_t, const ImageBuffer& x_t1,
                        const StepCoefficients& k) {
  require_same_shape(x_t, x_t1, "guided_step");
  const double w_prior = std::sqrt(k.alpha_bar_prev) * k.beta / k.noise_var;
  const double w_sample = std::sqrt(k.alpha) * k.noise_var_prev / k.noise_var;
  return combine(x_t1, w_prior, x_t, w_sample);
}

ImageBuffer guided_step(const ImageBuffer& x_t, const ImageBuffer& x_t1,
                        const StepCoefficients& k, Rng& rng) {
  ImageBuffer out = guided_mean(x_t, x_t1, k);
  add_noise(out, k.sigma2, rng);
  return out;
}

ImageBuffer guided_step(const ImageBuffer& x_t, const ImageBuffer& x_t1, int t,
                        const NoiseSchedule& schedule, Rng& rng) {
  return guided_step(x_t, x_t1, schedule.coefficients(t), rng);
}

ImageBuffer predict_x0(const ImageBuffer& x_t, const ImageBuffer& eps, int t,
                       const NoiseSchedule& schedule) {
  require_same_shape(x_t, eps, "predict_x0");
  const StepCoefficients k = schedule.coefficients(t);
  const double inv = 1.0 / std::sqrt(k.alpha_bar);
  return combine(x_t, inv, eps, -inv * std::sqrt(k.noise_var));
}

ImageBuffer gaussian_prior_eps(const ImageBuffer& x_t, int t, double m,
                               double s, const NoiseSchedule& schedule) {
  if (t == 0) {
    throw ParameterError("gaussian_prior_eps: noise is undefined at t = 0");
  }
  if (!(s >= 0.0)) {
    throw ParameterError(fmt::format("gaussian_prior_eps: s = {} < 0", s));
  }
  const StepCoefficients k = schedule.coefficients(t);
  const double ab = k.alpha_bar;
  const double root_ab = std::sqrt(ab);
  const double root_noise = std::sqrt(k.noise_var);
  const double gain = root_ab * s * s / (ab * s * s + k.noise_var);

  ImageBuffer out(x_t.height(), x_t.width(), x_t.channels());
  auto dst = out.samples();
  const auto src = x_t.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double x0_mean = m + gain * (src[i] - root_ab * m);
    dst[i] = (src[i] - root_ab * x0_mean) / root_noise;
  }
  return out;
}

GaussianPriorPredictor::GaussianPriorPredictor(double m, double s)
    : m_(m), s_(s) {
  if (!(s >= 0.0) || !std::isfinite(m) || !std::isfinite(s)) {
    throw ParameterError(
        fmt::format("gaussian predictor needs finite m and s >= 0 ({}, {})", m,
                    s));
  }
}

ImageBuffer GaussianPriorPredictor::predict(
    const ImageBuffer& x_t, int t, const NoiseSchedule& schedule) const {
  return gaussian_prior_eps(x_t, t, m_, s_, schedule);
}

}  // namespace wfp
