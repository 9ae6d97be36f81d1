// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <png.h>

#include "wfp/error.hpp"

namespace wfp {

namespace fs = std::filesystem;

namespace {

enum class FileKind { png, pfm };

FileKind kind_from_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".png") return FileKind::png;
  if (ext == ".pfm") return FileKind::pfm;
  throw FormatError(fmt::format("unsupported file extension '{}' ({})", ext,
                                path.string()));
}

ImageBuffer read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(fmt::format("{}: {}", path.string(), msg));
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw FormatError(fmt::format("{}: only 8-bit PNG is supported",
                                  path.string()));
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const int channels = color ? 3 : 1;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  const int height = static_cast<int>(image.height);
  const int width = static_cast<int>(image.width);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(fmt::format("{}: {}", path.string(), msg));
  }

  ImageBuffer out(height, width, channels);
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const auto v = buffer[(static_cast<std::size_t>(y) * width + x) *
                                  channels + c];
        out(c, y, x) = static_cast<double>(v) / 255.0;
      }
    }
  }
  out.retag(RangeTag::display);
  return out;
}

void write_png(const ImageBuffer& img, const fs::path& path) {
  const int channels = img.channels();
  std::vector<png_byte> buffer(img.size());
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const double v = std::clamp(img(c, y, x), 0.0, 1.0);
        buffer[(static_cast<std::size_t>(y) * img.width() + x) * channels + c] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0,
                               nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError(fmt::format("{}: {}", path.string(), msg));
  }
}

std::uint32_t load_le32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  }
  return v;
}

std::uint32_t load_be32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  }
  return v;
}

ImageBuffer read_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));

  // Header: three whitespace-separated tokens, then exactly one whitespace
  // byte before the payload.
  std::string magic;
  int width = 0;
  int height = 0;
  double scale = 0.0;
  if (!(in >> magic >> width >> height >> scale)) {
    throw FormatError(fmt::format("{}: malformed PFM header", path.string()));
  }
  in.get();
  int channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw FormatError(fmt::format("{}: bad PFM magic '{}'", path.string(),
                                  magic));
  }
  if (width < 1 || height < 1 || scale == 0.0 || !std::isfinite(scale)) {
    throw FormatError(fmt::format("{}: invalid PFM dimensions or scale",
                                  path.string()));
  }
  const bool little = scale < 0.0;

  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels;
  std::vector<char> payload(count * 4);
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    throw FormatError(fmt::format("{}: truncated PFM payload", path.string()));
  }

  ImageBuffer out(height, width, channels);
  bool in_display = true;
  for (int y = 0; y < height; ++y) {
    // PFM stores rows bottom to top.
    const int row = height - 1 - y;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const char* p =
            payload.data() +
            ((static_cast<std::size_t>(y) * width + x) * channels + c) * 4;
        const float f =
            std::bit_cast<float>(little ? load_le32(p) : load_be32(p));
        out(c, row, x) = static_cast<double>(f);
        in_display = in_display && f >= 0.0f && f <= 1.0f;
      }
    }
  }
  if (in_display) out.retag(RangeTag::display);
  return out;
}

}  // namespace

ImageBuffer load_image(const fs::path& path) {
  if (!fs::exists(path)) {
    throw IoError(fmt::format("no such file: {}", path.string()));
  }
  switch (kind_from_extension(path)) {
    case FileKind::png:
      return read_png(path);
    case FileKind::pfm:
      return read_pfm(path);
  }
  throw FormatError("unreachable");
}

void save_image(const ImageBuffer& img, const fs::path& path) {
  if (img.tag() != RangeTag::display) {
    throw ContractError(fmt::format(
        "save_image requires a display-range buffer, got {}",
        to_string(img.tag())));
  }
  switch (kind_from_extension(path)) {
    case FileKind::png:
      write_png(img, path);
      return;
    case FileKind::pfm:
      write_pfm(img, path);
      return;
  }
}

void write_pfm(const ImageBuffer& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << (img.channels() == 3 ? "PF" : "Pf") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << "-1.0\n";
  std::vector<char> payload(img.size() * 4);
  std::size_t k = 0;
  for (int y = img.height() - 1; y >= 0; --y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(img(c, y, x)));
        for (int b = 0; b < 4; ++b) {
          payload[k++] = static_cast<char>(bits & 0xffu);
          bits >>= 8;
        }
      }
    }
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

}  // namespace wfp
