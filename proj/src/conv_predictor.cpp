// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/conv_predictor.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>

#include <fmt/format.h>

#include "wfp/error.hpp"
#include "wfp/rng.hpp"

namespace wfp {

namespace {

constexpr std::string_view kMagic = "WFDP";
constexpr std::uint32_t kVersion = 1;

std::array<std::pair<int, int>, 3> layer_shapes(int channels, int hidden) {
  return {{{hidden, channels}, {hidden, hidden}, {channels, hidden}}};
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::vector<float> floats(std::size_t count, const char* what) {
    if (count > (bytes_.size() - pos_) / 4) {
      throw FormatError(fmt::format(
          "predictor weights: {} declares {} coefficients but only {} bytes "
          "remain",
          what, count, bytes_.size() - pos_));
    }
    std::vector<float> out(count);
    for (auto& f : out) {
      f = std::bit_cast<float>(u32(what));
      if (!std::isfinite(f)) {
        throw ValidationError(
            fmt::format("predictor weights: non-finite value in {}", what));
      }
    }
    return out;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(
          fmt::format("predictor weights: truncated while reading {}", what));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v & 0xffu));
    v >>= 8;
  }
}

void put_floats(std::vector<std::uint8_t>& out, const std::vector<float>& v) {
  for (float f : v) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

double silu(double x) { return x / (1.0 + std::exp(-x)); }

/// Direct 3x3 convolution with reflect padding over planar buffers.
std::vector<double> conv3x3(const ConvLayer& layer,
                            const std::vector<double>& input, int height,
                            int width) {
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  std::vector<double> out(plane * layer.out_channels);
  std::vector<int> rows(3 * height);
  std::vector<int> cols(3 * width);
  for (int y = 0; y < height; ++y) {
    for (int k = 0; k < 3; ++k) rows[3 * y + k] = reflect_index(y + k - 1, height);
  }
  for (int x = 0; x < width; ++x) {
    for (int k = 0; k < 3; ++k) cols[3 * x + k] = reflect_index(x + k - 1, width);
  }
  for (int o = 0; o < layer.out_channels; ++o) {
    double* dst = out.data() + o * plane;
    std::fill(dst, dst + plane, static_cast<double>(layer.bias[o]));
    for (int i = 0; i < layer.in_channels; ++i) {
      const double* src = input.data() + i * plane;
      const float* kernel =
          layer.filters.data() +
          (static_cast<std::size_t>(o) * layer.in_channels + i) * 9;
      for (int y = 0; y < height; ++y) {
        const int* ry = &rows[3 * y];
        for (int x = 0; x < width; ++x) {
          const int* cx = &cols[3 * x];
          double acc = 0.0;
          for (int ky = 0; ky < 3; ++ky) {
            const double* row = src + static_cast<std::size_t>(ry[ky]) * width;
            acc += kernel[3 * ky + 0] * row[cx[0]] +
                   kernel[3 * ky + 1] * row[cx[1]] +
                   kernel[3 * ky + 2] * row[cx[2]];
          }
          dst[static_cast<std::size_t>(y) * width + x] += acc;
        }
      }
    }
  }
  return out;
}

void validate(const ConvPredictorWeights& w) {
  if (w.channels != 1 && w.channels != 3) {
    throw ValidationError(
        fmt::format("predictor weights: channel count {} not in {{1, 3}}",
                    w.channels));
  }
  if (w.hidden != kPredictorHidden) {
    throw ValidationError(fmt::format(
        "predictor weights: hidden width {} != {}", w.hidden, kPredictorHidden));
  }
  const auto shapes = layer_shapes(w.channels, w.hidden);
  for (std::size_t l = 0; l < 3; ++l) {
    const ConvLayer& layer = w.layers[l];
    if (layer.out_channels != shapes[l].first ||
        layer.in_channels != shapes[l].second) {
      throw ValidationError(fmt::format(
          "predictor weights: layer {} is {}->{}, expected {}->{}", l + 1,
          layer.in_channels, layer.out_channels, shapes[l].second,
          shapes[l].first));
    }
    if (layer.filters.size() !=
            static_cast<std::size_t>(layer.out_channels) * layer.in_channels * 9 ||
        layer.bias.size() != static_cast<std::size_t>(layer.out_channels)) {
      throw ValidationError(fmt::format(
          "predictor weights: layer {} coefficient count mismatch", l + 1));
    }
  }
  if (w.time_matrix.size() != static_cast<std::size_t>(w.hidden) * w.hidden ||
      w.time_bias.size() != static_cast<std::size_t>(w.hidden)) {
    throw ValidationError("predictor weights: time map size mismatch");
  }
}

}  // namespace

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

ConvPredictorWeights ConvPredictorWeights::zeros(int channels) {
  ConvPredictorWeights w;
  w.channels = channels;
  const auto shapes = layer_shapes(channels, w.hidden);
  for (std::size_t l = 0; l < 3; ++l) {
    auto& layer = w.layers[l];
    layer.out_channels = shapes[l].first;
    layer.in_channels = shapes[l].second;
    layer.filters.assign(
        static_cast<std::size_t>(layer.out_channels) * layer.in_channels * 9,
        0.0f);
    layer.bias.assign(layer.out_channels, 0.0f);
  }
  w.time_matrix.assign(static_cast<std::size_t>(w.hidden) * w.hidden, 0.0f);
  w.time_bias.assign(w.hidden, 0.0f);
  validate(w);
  return w;
}

ConvPredictorWeights ConvPredictorWeights::random(int channels,
                                                  std::uint64_t seed,
                                                  double scale) {
  ConvPredictorWeights w = zeros(channels);
  Rng rng(seed);
  auto fill = [&](std::vector<float>& v) {
    for (float& f : v) {
      f = static_cast<float>(scale * (2.0 * rng.uniform() - 1.0));
    }
  };
  for (auto& layer : w.layers) {
    fill(layer.filters);
    fill(layer.bias);
  }
  fill(w.time_matrix);
  fill(w.time_bias);
  return w;
}

ConvPredictorWeights load_predictor_weights(
    std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 ||
      std::string_view(reinterpret_cast<const char*>(bytes.data()), 4) !=
          kMagic) {
    throw FormatError("predictor weights: bad magic (expected \"WFDP\")");
  }
  Reader in(bytes.subspan(4));
  const std::uint32_t version = in.u32("version");
  if (version != kVersion) {
    throw FormatError(
        fmt::format("predictor weights: unsupported version {}", version));
  }
  ConvPredictorWeights w;
  w.channels = static_cast<int>(in.u32("channel count"));
  w.hidden = static_cast<int>(in.u32("hidden width"));
  for (std::size_t l = 0; l < 3; ++l) {
    auto& layer = w.layers[l];
    const std::uint32_t out = in.u32("layer out-channels");
    const std::uint32_t inc = in.u32("layer in-channels");
    if (out > 4096 || inc > 4096) {
      throw ValidationError(fmt::format(
          "predictor weights: layer {} dimensions {}x{} out of range", l + 1,
          out, inc));
    }
    layer.out_channels = static_cast<int>(out);
    layer.in_channels = static_cast<int>(inc);
    layer.filters = in.floats(static_cast<std::size_t>(out) * inc * 9,
                              "layer filters");
    layer.bias = in.floats(out, "layer bias");
  }
  if (w.hidden < 0 || w.hidden > 4096) {
    throw ValidationError("predictor weights: hidden width out of range");
  }
  const auto hidden = static_cast<std::size_t>(w.hidden);
  w.time_matrix = in.floats(hidden * hidden, "time matrix");
  w.time_bias = in.floats(hidden, "time bias");
  if (in.remaining() != 0) {
    throw FormatError(fmt::format("predictor weights: {} trailing bytes",
                                  in.remaining()));
  }
  validate(w);
  return w;
}

ConvPredictorWeights load_predictor_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_predictor_weights(bytes);
}

std::vector<std::uint8_t> serialize_predictor_weights(
    const ConvPredictorWeights& w) {
  validate(w);
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(w.channels));
  put_u32(out, static_cast<std::uint32_t>(w.hidden));
  for (const auto& layer : w.layers) {
    put_u32(out, static_cast<std::uint32_t>(layer.out_channels));
    put_u32(out, static_cast<std::uint32_t>(layer.in_channels));
    put_floats(out, layer.filters);
    put_floats(out, layer.bias);
  }
  put_floats(out, w.time_matrix);
  put_floats(out, w.time_bias);
  return out;
}

std::array<double, kPredictorHidden> time_embedding(int t, int steps) {
  // Position on a 1000-step reference scale so the embedding frequencies
  // do not depend on the chain length.
  const double position = 1000.0 * static_cast<double>(t) / steps;
  constexpr int half = kPredictorHidden / 2;
  std::array<double, kPredictorHidden> emb{};
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / half);
    emb[i] = std::sin(position * freq);
    emb[half + i] = std::cos(position * freq);
  }
  return emb;
}

ImageBuffer conv_predictor_forward(const ConvPredictorWeights& w,
                                   const ImageBuffer& x_t, int t,
                                   const NoiseSchedule& schedule) {
  if (x_t.channels() != w.channels) {
    throw ShapeError(fmt::format(
        "conv predictor expects {} channels, got {}", w.channels,
        x_t.channels()));
  }
  const int height = x_t.height();
  const int width = x_t.width();
  const std::size_t plane = x_t.plane_size();

  std::vector<double> input(x_t.samples().begin(), x_t.samples().end());
  std::vector<double> h1 = conv3x3(w.layers[0], input, height, width);
  for (double& v : h1) v = silu(v);

  const auto emb = time_embedding(t, schedule.steps());
  std::vector<double> h2 = conv3x3(w.layers[1], h1, height, width);
  for (int o = 0; o < w.hidden; ++o) {
    double shift = w.time_bias[o];
    for (int k = 0; k < w.hidden; ++k) {
      shift += static_cast<double>(w.time_matrix[o * w.hidden + k]) * emb[k];
    }
    double* dst = h2.data() + o * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = silu(dst[i] + shift);
  }

  std::vector<double> y = conv3x3(w.layers[2], h2, height, width);
  return ImageBuffer(height, width, w.channels, std::move(y),
                     RangeTag::unbounded);
}

ConvPredictor::ConvPredictor(ConvPredictorWeights weights)
    : weights_(std::move(weights)) {
  validate(weights_);
}

ImageBuffer ConvPredictor::predict(const ImageBuffer& x_t, int t,
                                   const NoiseSchedule& schedule) const {
  return conv_predictor_forward(weights_, x_t, t, schedule);
}

}  // namespace wfp
