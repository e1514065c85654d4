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

// Reference fast-marching inpainter. Same weighting definition as the
// library's, but structured for clarity over speed: the narrow band is
// searched linearly each step, so it runs in O(N^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracles {

struct RefImage {
  int w = 0, h = 0;
  std::vector<std::array<double, 3>> px;
};

inline RefImage reference_telea(RefImage img, const std::vector<std::uint8_t>& hole, int radius,
                                const std::vector<std::uint8_t>* unavailable = nullptr) {
  enum State { kKnown, kBand, kInside, kOff };
  const int w = img.w, h = img.h;
  const auto id = [&](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  const auto inside_image = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };
  constexpr double kFar = 1e6;

  std::vector<State> st(img.px.size(), kKnown);
  std::vector<double> T(img.px.size(), 0.0);
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (hole[i]) {
      st[i] = kInside;
      T[i] = kFar;
    } else if (unavailable && (*unavailable)[i]) {
      st[i] = kOff;
    }
  }
  std::vector<std::uint8_t> queued(st.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (st[id(x, y)] != kKnown) continue;
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k)
        if (inside_image(nx[k], ny[k]) && st[id(nx[k], ny[k])] == kInside) {
          st[id(x, y)] = kBand;
          queued[id(x, y)] = 1;
          break;
        }
    }

  const auto readable = [&](int x, int y) {
    return inside_image(x, y) && (st[id(x, y)] == kKnown || st[id(x, y)] == kBand);
  };
  const auto pair_solution = [&](int ax, int ay, int bx, int by) {
    const bool ra = readable(ax, ay), rb = readable(bx, by);
    if (!ra && !rb) return kFar;
    if (ra && !rb) return T[id(ax, ay)] + 1.0;
    if (!ra && rb) return T[id(bx, by)] + 1.0;
    const double ta = T[id(ax, ay)], tb = T[id(bx, by)];
    if (std::abs(ta - tb) >= 1.0) return std::min(ta, tb) + 1.0;
    return (ta + tb + std::sqrt(2.0 - (ta - tb) * (ta - tb))) / 2.0;
  };
  const auto derivative = [&](int x, int y, int dx, int dy) {
    const bool f = readable(x + dx, y + dy), b = readable(x - dx, y - dy);
    const double c = T[id(x, y)];
    if (f && b) return (T[id(x + dx, y + dy)] - T[id(x - dx, y - dy)]) / 2.0;
    if (f) return T[id(x + dx, y + dy)] - c;
    if (b) return c - T[id(x - dx, y - dy)];
    return 0.0;
  };

  while (true) {
    // Smallest (T, index) among queued band pixels.
    std::size_t pick = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < st.size(); ++i)
      if (queued[i] && (pick == std::numeric_limits<std::size_t>::max() || T[i] < T[pick])) pick = i;
    if (pick == std::numeric_limits<std::size_t>::max()) break;
    queued[pick] = 0;
    st[pick] = kKnown;
    const int px = static_cast<int>(pick % static_cast<std::size_t>(w));
    const int py = static_cast<int>(pick / static_cast<std::size_t>(w));
    const int nx[4] = {px, px - 1, px + 1, px};
    const int ny[4] = {py - 1, py, py, py + 1};
    for (int k = 0; k < 4; ++k) {
      const int x = nx[k], y = ny[k];
      if (!inside_image(x, y) || st[id(x, y)] != kInside) continue;
      T[id(x, y)] = std::min({pair_solution(x - 1, y, x, y - 1), pair_solution(x + 1, y, x, y - 1),
                              pair_solution(x - 1, y, x, y + 1), pair_solution(x + 1, y, x, y + 1)});
      double gx = derivative(x, y, 1, 0), gy = derivative(x, y, 0, 1);
      const double norm = std::sqrt(gx * gx + gy * gy);
      if (norm > 0.0) {
        gx /= norm;
        gy /= norm;
      }
      std::array<double, 3> sum{0.0, 0.0, 0.0};
      double total = 0.0;
      for (int yy = y - radius; yy <= y + radius; ++yy)
        for (int xx = x - radius; xx <= x + radius; ++xx) {
          const int d2 = (xx - x) * (xx - x) + (yy - y) * (yy - y);
          if (d2 == 0 || d2 > radius * radius || !readable(xx, yy)) continue;
          const double rx = x - xx, ry = y - yy;
          const double direction = std::max(std::abs(rx * gx + ry * gy) / std::sqrt(d2), 1e-6);
          const double weight = direction / d2 / (1.0 + std::abs(T[id(xx, yy)] - T[id(x, y)]));
          for (int c = 0; c < 3; ++c) sum[c] += weight * img.px[id(xx, yy)][c];
          total += weight;
        }
      for (int c = 0; c < 3; ++c)
        img.px[id(x, y)][c] = std::round(std::clamp(sum[c] / total, 0.0, 255.0));
      st[id(x, y)] = kBand;
      queued[id(x, y)] = 1;
    }
  }
  return img;
}

}  // namespace oracles
