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

#include <array>
#include <cstdint>
#include <string_view>

#include "scene4d/depth_map.hpp"
#include "scene4d/grid.hpp"

namespace scene4d {

// Which stage produced a pixel. The numeric codes are the on-disk values.
enum class Provenance : std::uint8_t {
  Original = 0,
  Warped = 1,
  Telea = 2,
  External = 3,
  CopiedPrevT = 4,
};

inline constexpr int kProvenanceCount = 5;

inline constexpr std::string_view provenance_name(Provenance p) {
  constexpr std::array<std::string_view, kProvenanceCount> names = {
      "original", "warped", "telea", "external", "copied_prev_t"};
  return names[static_cast<std::size_t>(p)];
}

// One view at one timestamp: color, depth, which pixels are still missing,
// and where every pixel came from.
struct Frame {
  ColorImage color;
  DepthMap depth;
  Mask holes;  // 1 = missing
  Grid<Provenance> provenance;

  Frame() = default;
  Frame(int width, int height, Provenance p = Provenance::Original)
      : color(width, height), depth(width, height), holes(width, height, 0),
        provenance(width, height, p) {}

  int width() const { return color.width(); }
  int height() const { return color.height(); }

  // Fully observed frame: every pixel original, no holes.
  static Frame original(ColorImage color, DepthMap depth) {
    require_same_shape(color, depth.values, "frame color/depth");
    Frame f;
    f.holes = Mask(color.width(), color.height(), 0);
    f.provenance = Grid<Provenance>(color.width(), color.height(), Provenance::Original);
    for (std::size_t i = 0; i < f.holes.size(); ++i) f.holes[i] = depth.valid[i] ? 0 : 1;
    f.color = std::move(color);
    f.depth = std::move(depth);
    return f;
  }

  std::array<std::size_t, kProvenanceCount> provenance_histogram() const {
    std::array<std::size_t, kProvenanceCount> h{};
    for (Provenance p : provenance.pixels()) ++h[static_cast<std::size_t>(p)];
    return h;
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Output of a forward warp; same layout as a frame, holes where nothing landed.
using WarpedFrame = Frame;

}  // namespace scene4d
