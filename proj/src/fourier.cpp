// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "wfp/error.hpp"

namespace wfp {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

/// One 2-D complex transform over an fftw_malloc'd buffer. The buffer is
/// always SIMD-aligned, so the chosen codelets (and results) do not depend
/// on where std::vector happened to allocate.
class Plan2d {
 public:
  Plan2d(int height, int width, int sign)
      : size_(static_cast<std::size_t>(height) * width),
        data_(fftw_alloc_complex(size_)) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_2d(height, width, data_.get(), data_.get(), sign,
                             FFTW_ESTIMATE);
  }
  ~Plan2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan2d(const Plan2d&) = delete;
  Plan2d& operator=(const Plan2d&) = delete;

  std::complex<double>* data() {
    return reinterpret_cast<std::complex<double>*>(data_.get());
  }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t size_;
  std::unique_ptr<fftw_complex[], FftwFree> data_;
  fftw_plan plan_;
};

}  // namespace

Spectrum fft2(const ImageBuffer& img) {
  const int height = img.height();
  const int width = img.width();
  Spectrum out(height, width, img.channels());
  Plan2d plan(height, width, FFTW_FORWARD);
  std::complex<double>* buf = plan.data();

  for (int c = 0; c < img.channels(); ++c) {
    const auto src = img.plane(c);
    for (std::size_t i = 0; i < src.size(); ++i) buf[i] = {src[i], 0.0};
    plan.execute();
    // Real input: F(-u, -v) = conj F(u, v). Averaging each bin with its
    // mirrored conjugate enforces that identity bit-exactly.
    for (int u = 0; u < height; ++u) {
      const int mu = (height - u) % height;
      for (int v = 0; v < width; ++v) {
        const int mv = (width - v) % width;
        const auto a = buf[static_cast<std::size_t>(u) * width + v];
        const auto b = buf[static_cast<std::size_t>(mu) * width + mv];
        out(c, u, v) = 0.5 * (a + std::conj(b));
      }
    }
  }
  return out;
}

AmplitudePhase amp_phase(const Spectrum& spec) {
  AmplitudePhase out{spec.height, spec.width, spec.channels, {}, {}};
  out.amp.resize(spec.bins.size());
  out.pha.resize(spec.bins.size());
  for (std::size_t i = 0; i < spec.bins.size(); ++i) {
    const auto z = spec.bins[i];
    const double a = std::abs(z);
    out.amp[i] = a;
    if (a == 0.0) {
      out.pha[i] = 0.0;
    } else {
      const double p = std::atan2(z.imag(), z.real());
      out.pha[i] = p <= -std::numbers::pi ? std::numbers::pi : p;
    }
  }
  return out;
}

Spectrum recompose(const AmplitudePhase& ap) {
  const std::size_t expected =
      static_cast<std::size_t>(ap.height) * ap.width * ap.channels;
  if (ap.amp.size() != expected || ap.pha.size() != expected) {
    throw ShapeError(fmt::format(
        "recompose: amplitude has {} bins and phase {}, expected {}",
        ap.amp.size(), ap.pha.size(), expected));
  }
  Spectrum out(ap.height, ap.width, ap.channels);
  for (std::size_t i = 0; i < expected; ++i) {
    out.bins[i] = std::polar(ap.amp[i], ap.pha[i]);
  }
  return out;
}

ImageBuffer ifft2_real(const Spectrum& spec) {
  const int height = spec.height;
  const int width = spec.width;
  ImageBuffer out(height, width, spec.channels);
  Plan2d plan(height, width, FFTW_BACKWARD);
  std::complex<double>* buf = plan.data();
  const double norm = 1.0 / (static_cast<double>(height) * width);
  const std::size_t n = static_cast<std::size_t>(height) * width;

  double max_real = 0.0;
  double max_imag = 0.0;
  for (int c = 0; c < spec.channels; ++c) {
    std::copy_n(spec.bins.begin() + static_cast<std::ptrdiff_t>(c * n), n, buf);
    plan.execute();
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = buf[i] * norm;
      dst[i] = z.real();
      max_real = std::max(max_real, std::abs(z.real()));
      max_imag = std::max(max_imag, std::abs(z.imag()));
    }
  }
  if (max_imag > 1e-3 * max_real + 1e-12) {
    throw SymmetryError(fmt::format(
        "ifft2_real: imaginary residual {:.3g} against real peak {:.3g}",
        max_imag, max_real));
  }
  return out;
}

}  // namespace wfp
