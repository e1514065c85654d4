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

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "scene4d/grid.hpp"

namespace scene4d {

// Per-pixel depth along the camera z axis. A pixel is usable only where
// `valid` is set; valid values are positive and finite, invalid ones hold 0.
struct DepthMap {
  Grid<double> values;
  Mask valid;

  DepthMap() = default;
  DepthMap(int width, int height) : values(width, height, 0.0), valid(width, height, 0) {}

  // Validity derived from the values themselves (positive and finite).
  static DepthMap from_values(Grid<double> v) {
    DepthMap d;
    d.valid = Mask(v.width(), v.height(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > 0.0 && std::isfinite(v[i])) {
        d.valid[i] = 1;
      } else {
        v[i] = 0.0;
      }
    }
    d.values = std::move(v);
    return d;
  }

  int width() const { return values.width(); }
  int height() const { return values.height(); }

  void set(std::size_t i, double z) {
    if (z > 0.0 && std::isfinite(z)) {
      values[i] = z;
      valid[i] = 1;
    } else {
      values[i] = 0.0;
      valid[i] = 0;
    }
  }
  void invalidate(std::size_t i) {
    values[i] = 0.0;
    valid[i] = 0;
  }

  // (min, max) over valid pixels; nullopt when nothing is valid.
  std::optional<std::pair<double, double>> range() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!valid[i]) continue;
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    if (lo > hi) return std::nullopt;
    return std::pair{lo, hi};
  }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

}  // namespace scene4d
