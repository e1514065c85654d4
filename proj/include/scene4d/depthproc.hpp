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
#include <cstddef>
#include <utility>
#include <vector>

#include "scene4d/depth_map.hpp"
#include "scene4d/parallel.hpp"

namespace scene4d {

// Scale/shift that maps a predicted depth onto a reference depth.
struct AlignmentResult {
  double gamma = 1.0;
  double beta = 0.0;
  double rms_residual = 0.0;
  std::size_t n_pixels = 0;

  friend bool operator==(const AlignmentResult&, const AlignmentResult&) = default;
};

// Least-squares fit of gamma * d_hat + beta to d_ref over pixels selected by
// `mask` that are valid in both maps. Solved in closed form from the centered
// 2x2 normal equations.
inline AlignmentResult align_depth(const DepthMap& d_hat, const DepthMap& d_ref, const Mask& mask) {
  require_same_shape(d_hat.values, d_ref.values, "align_depth maps");
  require_same_shape(d_hat.values, mask, "align_depth mask");

  // Samples are summed in sorted order so the result does not depend on
  // where in the image each sample sits.
  std::vector<std::pair<double, double>> xy;
  xy.reserve(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] && d_hat.valid[i] && d_ref.valid[i]) xy.emplace_back(d_hat.values[i], d_ref.values[i]);
  if (xy.size() < 2) throw SingularSystem("depth alignment needs at least two masked pixels");
  std::sort(xy.begin(), xy.end());
  if (xy.front().first == xy.back().first)
    throw SingularSystem("predicted depth has zero variance over the mask");

  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }

  AlignmentResult a;
  a.gamma = sxy / sxx;
  a.beta = my - a.gamma * mx;
  a.n_pixels = xy.size();
  double ss = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = a.gamma * x + a.beta - y;
    ss += r * r;
  }
  a.rms_residual = std::sqrt(ss / n);
  return a;
}

// Non-positive outputs become invalid.
inline DepthMap apply_alignment(const DepthMap& d_hat, const AlignmentResult& a) {
  DepthMap out(d_hat.width(), d_hat.height());
  for (std::size_t i = 0; i < d_hat.values.size(); ++i)
    if (d_hat.valid[i]) out.set(i, a.gamma * d_hat.values[i] + a.beta);
  return out;
}

// Edge-preserving bilateral filter guided by the depth itself. Only valid
// pixels contribute or change; each output is a convex combination of valid
// inputs in the window, so blended boundary pixels are pulled toward the
// plateau they are closer to.
inline DepthMap sharpen_depth(const DepthMap& d, int filter_size, double sigma_space,
                              double sigma_range, int threads = 1) {
  if (filter_size < 1 || filter_size % 2 == 0)
    throw InvalidConfig("bilateral filter size must be a positive odd number");
  if (!(sigma_space > 0.0) || !(sigma_range > 0.0))
    throw InvalidConfig("bilateral sigmas must be positive");

  const int r = filter_size / 2;
  const int w = d.width();
  const int h = d.height();
  std::vector<double> spatial(static_cast<std::size_t>(filter_size * filter_size));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      spatial[static_cast<std::size_t>((dy + r) * filter_size + dx + r)] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_space * sigma_space));
  const double range_scale = -1.0 / (2.0 * sigma_range * sigma_range);

  DepthMap out = d;
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = d.values.index(x, y);
      if (!d.valid[i]) continue;
      const double center = d.values[i];
      double num = 0.0, den = 0.0;
      double lo = center, hi = center;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          const std::size_t j = d.values.index(xx, yy);
          if (!d.valid[j]) continue;
          const double diff = d.values[j] - center;
          const double wt = spatial[static_cast<std::size_t>((dy + r) * filter_size + dx + r)] *
                            std::exp(diff * diff * range_scale);
          num += wt * d.values[j];
          den += wt;
          lo = std::min(lo, d.values[j]);
          hi = std::max(hi, d.values[j]);
        }
      }
      // Clamp guards the convex-combination bound against rounding.
      out.values[i] = std::clamp(num / den, lo, hi);
    }
  });
  return out;
}

}  // namespace scene4d
