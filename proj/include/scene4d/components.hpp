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

#include <cstdint>
#include <vector>

#include "scene4d/grid.hpp"

namespace scene4d {

// A 4-connected set of pixels, stored as row-major indices in discovery order.
struct Component {
  std::vector<std::uint32_t> pixels;
  std::size_t area() const { return pixels.size(); }
  friend bool operator==(const Component&, const Component&) = default;
};

// 4-connected components of the set pixels of `mask`, ordered by their first
// pixel in row-major order.
inline std::vector<Component> connected_components(const Mask& mask) {
  std::vector<Component> out;
  std::vector<char> seen(mask.size(), 0);
  std::vector<std::uint32_t> stack;
  const int w = mask.width();
  const int h = mask.height();
  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    Component c;
    stack.assign(1, static_cast<std::uint32_t>(start));
    seen[start] = 1;
    while (!stack.empty()) {
      const std::uint32_t i = stack.back();
      stack.pop_back();
      c.pixels.push_back(i);
      const int x = static_cast<int>(i % static_cast<std::uint32_t>(w));
      const int y = static_cast<int>(i / static_cast<std::uint32_t>(w));
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        const std::size_t j = mask.index(nx[k], ny[k]);
        if (mask[j] && !seen[j]) {
          seen[j] = 1;
          stack.push_back(static_cast<std::uint32_t>(j));
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline Mask component_mask(const Component& c, int width, int height) {
  Mask m(width, height, 0);
  for (std::uint32_t i : c.pixels) m[i] = 1;
  return m;
}

}  // namespace scene4d
