/* Copyright 2026 The scene4d Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Byte-level encodings shared by the wire protocol and the dataset format:
// PNG images, base64 text, and little-endian float32 depth rasters.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>
#include <png.h>

#include "scene4d/depth_map.hpp"
#include "scene4d/grid.hpp"

namespace scene4d::codec {

using Bytes = std::vector<std::uint8_t>;

inline std::string base64_encode(const Bytes& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline Bytes base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64 length is not a multiple of 4");
  Bytes out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw FormatError("invalid base64 payload");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

namespace detail {

inline Bytes png_write(const void* pixels, int width, int height, png_uint_32 format) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, 0, nullptr))
    throw FormatError(std::string("png sizing failed: ") + img.message);
  Bytes out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr))
    throw FormatError(std::string("png encode failed: ") + img.message);
  out.resize(size);
  return out;
}

template <class Pixel>
Grid<Pixel> png_read(const Bytes& bytes, png_uint_32 format) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
    throw FormatError(std::string("png header: ") + img.message);
  img.format = format;
  Grid<Pixel> out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.pixels().data(), 0, nullptr)) {
    png_image_free(&img);
    throw FormatError(std::string("png decode: ") + img.message);
  }
  return out;
}

}  // namespace detail

static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed for PNG I/O");

inline Bytes encode_png(const ColorImage& img) {
  return detail::png_write(img.pixels().data(), img.width(), img.height(), PNG_FORMAT_RGB);
}
inline Bytes encode_png(const Grid<std::uint8_t>& gray) {
  return detail::png_write(gray.pixels().data(), gray.width(), gray.height(), PNG_FORMAT_GRAY);
}
inline ColorImage decode_png_rgb(const Bytes& bytes) {
  return detail::png_read<Rgb>(bytes, PNG_FORMAT_RGB);
}
inline Grid<std::uint8_t> decode_png_gray(const Bytes& bytes) {
  return detail::png_read<std::uint8_t>(bytes, PNG_FORMAT_GRAY);
}

// Mask <-> single-channel image where 255 marks set pixels.
inline Grid<std::uint8_t> mask_to_image(const Mask& m) {
  Grid<std::uint8_t> out(m.width(), m.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 255 : 0;
  return out;
}
inline Mask image_to_mask(const Grid<std::uint8_t>& img) {
  Mask out(img.width(), img.height(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (img[i] != 0 && img[i] != 255) throw ProtocolViolation("mask pixels must be 0 or 255");
    out[i] = img[i] == 255 ? 1 : 0;
  }
  return out;
}

// Raw little-endian float32, row-major, no header. Invalid pixels become 0.
inline Bytes encode_f32(const DepthMap& d) {
  Bytes out(d.values.size() * 4);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    const float f = d.valid[i] ? static_cast<float>(d.values[i]) : 0.0f;
    std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
    for (int b = 0; b < 4; ++b) out[i * 4 + b] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return out;
}

inline DepthMap decode_f32(const std::uint8_t* data, std::size_t size, int width, int height) {
  if (width < 0 || height < 0 ||
      size != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4)
    throw FormatError("float raster size does not match its dimensions");
  Grid<double> v(width, height);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(data[i * 4 + b]) << (8 * b);
    v[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return DepthMap::from_values(std::move(v));
}

// Depth file: "PS4D", u32 width, u32 height (little-endian), then the raster.
inline constexpr char kDepthMagic[4] = {'P', 'S', '4', 'D'};

inline Bytes encode_depth_file(const DepthMap& d) {
  Bytes out(12);
  std::memcpy(out.data(), kDepthMagic, 4);
  const auto put_u32 = [&](std::size_t at, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out[at + b] = static_cast<std::uint8_t>(v >> (8 * b));
  };
  put_u32(4, static_cast<std::uint32_t>(d.width()));
  put_u32(8, static_cast<std::uint32_t>(d.height()));
  const Bytes raster = encode_f32(d);
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

inline DepthMap decode_depth_file(const Bytes& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kDepthMagic, 4) != 0)
    throw FormatError("depth file magic mismatch");
  const auto get_u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes[at + b]) << (8 * b);
    return v;
  };
  const std::uint32_t w = get_u32(4), h = get_u32(8);
  if (w > (1u << 16) || h > (1u << 16)) throw FormatError("depth file dimensions out of range");
  return decode_f32(bytes.data() + 12, bytes.size() - 12, static_cast<int>(w), static_cast<int>(h));
}

}  // namespace scene4d::codec
