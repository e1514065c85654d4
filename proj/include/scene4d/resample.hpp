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

#include <algorithm>
#include <cmath>

#include "scene4d/depth_map.hpp"
#include "scene4d/grid.hpp"

namespace scene4d {

// Area-weighted resize. Each output pixel averages the source pixels its
// footprint overlaps, weighted by overlap area.
inline ColorImage resize_area(const ColorImage& src, int width, int height) {
  if (width < 1 || height < 1) throw InvalidConfig("resize target must be at least 1x1");
  if (src.width() == width && src.height() == height) return src;
  ColorImage out(width, height);
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double y0 = y * sy, y1 = (y + 1) * sy;
    for (int x = 0; x < width; ++x) {
      const double x0 = x * sx, x1 = (x + 1) * sx;
      double acc[3] = {0, 0, 0}, total = 0.0;
      for (int yy = static_cast<int>(y0); yy < std::min<int>(src.height(), static_cast<int>(std::ceil(y1))); ++yy) {
        const double wy = std::min<double>(yy + 1, y1) - std::max<double>(yy, y0);
        if (wy <= 0.0) continue;
        for (int xx = static_cast<int>(x0); xx < std::min<int>(src.width(), static_cast<int>(std::ceil(x1))); ++xx) {
          const double wx = std::min<double>(xx + 1, x1) - std::max<double>(xx, x0);
          if (wx <= 0.0) continue;
          const Rgb& p = src(xx, yy);
          acc[0] += wx * wy * p.r;
          acc[1] += wx * wy * p.g;
          acc[2] += wx * wy * p.b;
          total += wx * wy;
        }
      }
      const auto channel = [&](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v / total), 0L, 255L));
      };
      out(x, y) = Rgb{channel(acc[0]), channel(acc[1]), channel(acc[2])};
    }
  }
  return out;
}

// Nearest-sample resize; depth is never blended across edges.
inline DepthMap resize_nearest(const DepthMap& src, int width, int height) {
  if (width < 1 || height < 1) throw InvalidConfig("resize target must be at least 1x1");
  if (src.width() == width && src.height() == height) return src;
  DepthMap out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height() - 1, static_cast<int>((y + 0.5) * src.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width() - 1, static_cast<int>((x + 0.5) * src.width() / width));
      const std::size_t i = src.values.index(sx, sy);
      if (src.valid[i]) out.set(out.values.index(x, y), src.values[i]);
    }
  }
  return out;
}

}  // namespace scene4d
