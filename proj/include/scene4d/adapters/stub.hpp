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

// In-process stand-ins for every model capability. Deterministic, no I/O.

#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "scene4d/adapters/types.hpp"
#include "scene4d/camera.hpp"
#include "scene4d/components.hpp"
#include "scene4d/oracle.hpp"

namespace scene4d::adapters {

// Foreground where depth < min + alpha * (max - min) over valid pixels. A
// zero depth range yields no foreground; invalid pixels are background.
inline Mask depth_threshold_mask(const DepthMap& depth, double alpha) {
  Mask fg(depth.width(), depth.height(), 0);
  const auto range = depth.range();
  if (!range || range->second == range->first) return fg;
  const double cut = range->first + alpha * (range->second - range->first);
  for (std::size_t i = 0; i < fg.size(); ++i)
    fg[i] = depth.valid[i] && depth.values[i] < cut ? 1 : 0;
  return fg;
}

// Fills each 4-connected masked region with the mean color of the unmasked
// pixels within two pixels (8-neighborhood) of it.
inline ColorImage ring_mean_fill(const ColorImage& image, const Mask& mask) {
  ColorImage out = image;
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint32_t> ring_mark(image.size(), 0);
  std::uint32_t stamp = 0;
  for (const Component& c : connected_components(mask)) {
    ++stamp;
    std::array<double, 3> sum{};
    double count = 0.0;
    for (std::uint32_t p : c.pixels) {
      const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
      const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          const std::size_t j = image.index(xx, yy);
          if (mask[j] || ring_mark[j] == stamp) continue;
          ring_mark[j] = stamp;
          sum[0] += image[j].r;
          sum[1] += image[j].g;
          sum[2] += image[j].b;
          count += 1.0;
        }
    }
    Rgb fill{128, 128, 128};
    if (count > 0.0) {
      const auto ch = [&](int k) {
        return static_cast<std::uint8_t>(std::lround(sum[static_cast<std::size_t>(k)] / count));
      };
      fill = {ch(0), ch(1), ch(2)};
    }
    for (std::uint32_t p : c.pixels) out[p] = fill;
  }
  return out;
}

struct StubOptions {
  // Scene the generate stub renders for a given seed.
  std::function<oracle::SceneSpec(std::uint64_t)> scene = oracle::two_layer_scene;
  double fov_deg = 60.0;
  // When set, relative-mode depth is returned as (d - beta) / gamma and flagged
  // relative, so metric = gamma * relative + beta.
  std::optional<std::pair<double, double>> relative_affine;
  double segment_alpha = 0.35;
};

// generate renders the oracle scene from the identity pose; depth returns the
// oracle depth for frames it generated and a fixed vertical ramp otherwise;
// inpaint fills with the surrounding ring mean; segment thresholds depth;
// score returns all zeros.
class StubBackend final : public Backend {
 public:
  explicit StubBackend(StubOptions opts = {}) : opts_(std::move(opts)) {}

  std::vector<ColorImage> generate(const GenerateRequest& req) override {
    req.validate();
    const auto scene = opts_.scene(static_cast<std::uint64_t>(req.seed));
    const Intrinsics k = make_intrinsics(opts_.fov_deg, req.width, req.height);
    auto renders = oracle::render_sequence(scene, Pose(), k, req.num_frames);
    std::vector<ColorImage> frames;
    std::lock_guard lock(mu_);
    for (auto& r : renders) {
      frames.push_back(r.frame.color);
      known_.emplace_back(r.frame.color, r.frame.depth);
    }
    return frames;
  }

  DepthResponse depth(const DepthRequest& req) override {
    DepthResponse resp;
    for (const auto& f : req.frames) resp.depths.push_back(lookup_depth(f));
    if (req.mode == DepthMode::Relative && opts_.relative_affine) {
      const auto [gamma, beta] = *opts_.relative_affine;
      for (auto& d : resp.depths)
        for (std::size_t i = 0; i < d.values.size(); ++i)
          if (d.valid[i]) d.set(i, (d.values[i] - beta) / gamma);
      resp.relative = true;
    }
    return resp;
  }

  ColorImage inpaint(const InpaintRequest& req) override {
    require_same_shape(req.image, req.mask, "inpaint image/mask");
    return ring_mean_fill(req.image, req.mask);
  }

  Mask segment(const SegmentRequest& req) override {
    if (!req.depth) return Mask(req.image.width(), req.image.height(), 0);
    return depth_threshold_mask(*req.depth, opts_.segment_alpha);
  }

  std::vector<double> score(const ScoreRequest& req) override {
    return std::vector<double>(req.candidates.size(), 0.0);
  }

  const StubOptions& options() const { return opts_; }

 private:
  DepthMap lookup_depth(const ColorImage& frame) {
    {
      std::lock_guard lock(mu_);
      for (const auto& [color, depth] : known_)
        if (color == frame) return depth;
    }
    Grid<double> ramp(frame.width(), frame.height());
    for (int y = 0; y < frame.height(); ++y)
      for (int x = 0; x < frame.width(); ++x)
        ramp(x, y) = 1.0 + static_cast<double>(y) / std::max(frame.height(), 1);
    return DepthMap::from_values(std::move(ramp));
  }

  StubOptions opts_;
  std::mutex mu_;
  std::vector<std::pair<ColorImage, DepthMap>> known_;
};

}  // namespace scene4d::adapters
