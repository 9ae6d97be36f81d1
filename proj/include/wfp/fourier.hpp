// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wfp/image.hpp"

namespace wfp {

/// Per-channel 2-D spectrum, planar like ImageBuffer.
struct Spectrum {
  int height;
  int width;
  int channels;
  std::vector<std::complex<double>> bins;

  Spectrum(int h, int w, int c)
      : height(h), width(w), channels(c),
        bins(static_cast<std::size_t>(h) * w * c) {}

  std::complex<double>& operator()(int c, int u, int v) {
    return bins[(static_cast<std::size_t>(c) * height + u) * width + v];
  }
  const std::complex<double>& operator()(int c, int u, int v) const {
    return bins[(static_cast<std::size_t>(c) * height + u) * width + v];
  }
};

/// Polar form of a Spectrum: amp >= 0, pha in (-pi, pi], pha = 0 where
/// amp = 0.
struct AmplitudePhase {
  int height;
  int width;
  int channels;
  std::vector<double> amp;
  std::vector<double> pha;
};

/// Unnormalized forward DFT per channel,
///   F(u, v) = sum x(m, n) exp(-2 pi i (u m / H + v n / W)).
/// Any size is accepted. The output is made exactly Hermitian, so bins u
/// and -u are bitwise conjugates.
Spectrum fft2(const ImageBuffer& img);

AmplitudePhase amp_phase(const Spectrum& spec);

/// amp * (cos pha + i sin pha). Throws ShapeError if amp and pha differ.
Spectrum recompose(const AmplitudePhase& ap);

/// Inverse DFT with 1 / (H W) normalization, keeping the real part. Throws
/// SymmetryError when max|imag| exceeds 1e-3 * max|real| (plus a 1e-12
/// absolute floor), which signals an inconsistent amplitude/phase pair.
ImageBuffer ifft2_real(const Spectrum& spec);

}  // namespace wfp
