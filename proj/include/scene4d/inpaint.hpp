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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "scene4d/adapters/client.hpp"
#include "scene4d/components.hpp"
#include "scene4d/frame.hpp"
#include "scene4d/parallel.hpp"

namespace scene4d {

// ---- hole classification ----------------------------------------------------

struct HolePartition {
  std::vector<Component> large;
  std::vector<Component> small;
  std::size_t threshold = 64;

  std::size_t total_area() const {
    std::size_t a = 0;
    for (const auto& c : large) a += c.area();
    for (const auto& c : small) a += c.area();
    return a;
  }
};

inline HolePartition partition_holes(const Mask& mask, std::size_t threshold) {
  HolePartition p;
  p.threshold = threshold;
  for (auto& c : connected_components(mask))
    (c.area() >= threshold ? p.large : p.small).push_back(std::move(c));
  return p;
}

// Hole area threshold scaled with pixel count from `base_threshold` at the
// 160x96 reference resolution.
inline std::size_t scaled_hole_threshold(std::size_t base_threshold, int width, int height) {
  const double scale = static_cast<double>(width) * height / (160.0 * 96.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(base_threshold * scale)));
}

// ---- fast-marching inpainting -----------------------------------------------

template <class Pixel>
struct PixelTraits;

template <>
struct PixelTraits<Rgb> {
  static constexpr int kChannels = 3;
  static double get(const Rgb& p, int c) { return c == 0 ? p.r : c == 1 ? p.g : p.b; }
  static Rgb make(const std::array<double, 3>& v) {
    const auto q = [](double x) {
      return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 255.0)));
    };
    return {q(v[0]), q(v[1]), q(v[2])};
  }
};

template <>
struct PixelTraits<double> {
  static constexpr int kChannels = 1;
  static double get(double p, int) { return p; }
  static double make(const std::array<double, 1>& v) { return v[0]; }
};

// Telea fast-marching inpainting. Hole pixels (mask set) are filled in order
// of increasing arrival time T from the hole boundary; each is the normalized
// weighted mean of usable pixels within `radius`, weighted by direction
// (alignment with grad T), geometric distance (1/|r|^2) and level-set distance
// (1/(1+|dT|)). Equal T are taken in row-major order. Pixels in `unavailable`
// are neither read nor written. All other pixels are returned untouched.
template <class Pixel>
Grid<Pixel> telea_inpaint(const Grid<Pixel>& image, const Mask& mask, int radius = 3,
                          const Mask* unavailable = nullptr) {
  require_same_shape(image, mask, "telea image/mask");
  if (unavailable) require_same_shape(image, *unavailable, "telea unavailable mask");
  if (radius < 1) throw InvalidConfig("inpaint radius must be at least 1");

  enum : std::uint8_t { Known, Band, Inside, Blocked };
  using Traits = PixelTraits<Pixel>;
  constexpr int C = Traits::kChannels;
  constexpr double kInf = 1e6;

  const int w = image.width();
  const int h = image.height();
  Grid<Pixel> out = image;
  std::vector<std::uint8_t> flag(image.size(), Known);
  std::vector<double> T(image.size(), 0.0);

  std::size_t inside = 0, known = 0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (mask[i]) {
      flag[i] = Inside;
      T[i] = kInf;
      ++inside;
    } else if (unavailable && (*unavailable)[i]) {
      flag[i] = Blocked;
    } else {
      ++known;
    }
  }
  if (inside == 0) return out;
  if (known == 0) throw NothingToInpaintFrom("image has no known pixel to inpaint from");

  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const auto usable = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return false;
    const auto f = flag[image.index(x, y)];
    return f == Known || f == Band;
  };

  // Known pixels touching the hole form the initial band at T = 0.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = image.index(x, y);
      if (flag[i] != Known) continue;
      const bool touches = (x > 0 && flag[i - 1] == Inside) || (x + 1 < w && flag[i + 1] == Inside) ||
                           (y > 0 && flag[i - static_cast<std::size_t>(w)] == Inside) ||
                           (y + 1 < h && flag[i + static_cast<std::size_t>(w)] == Inside);
      if (touches) {
        flag[i] = Band;
        heap.emplace(0.0, static_cast<std::uint32_t>(i));
      }
    }

  // First-order upwind solution of |grad T| = 1 from two axis neighbors.
  const auto solve = [&](int x1, int y1, int x2, int y2) {
    const bool u1 = usable(x1, y1), u2 = usable(x2, y2);
    const double t1 = u1 ? T[image.index(x1, y1)] : kInf;
    const double t2 = u2 ? T[image.index(x2, y2)] : kInf;
    if (u1 && u2) {
      const double d = t1 - t2;
      if (std::abs(d) >= 1.0) return 1.0 + std::min(t1, t2);
      return 0.5 * (t1 + t2 + std::sqrt(2.0 - d * d));
    }
    if (u1) return 1.0 + t1;
    if (u2) return 1.0 + t2;
    return kInf;
  };

  const auto axis_grad = [&](int x, int y, int dx, int dy, double tc) {
    const bool fwd = usable(x + dx, y + dy), bwd = usable(x - dx, y - dy);
    if (fwd && bwd)
      return 0.5 * (T[image.index(x + dx, y + dy)] - T[image.index(x - dx, y - dy)]);
    if (fwd) return T[image.index(x + dx, y + dy)] - tc;
    if (bwd) return tc - T[image.index(x - dx, y - dy)];
    return 0.0;
  };

  const auto fill = [&](int x, int y) {
    const std::size_t i = image.index(x, y);
    const double tc = T[i];
    double gx = axis_grad(x, y, 1, 0, tc);
    double gy = axis_grad(x, y, 0, 1, tc);
    const double gn = std::hypot(gx, gy);
    if (gn > 0.0) {
      gx /= gn;
      gy /= gn;
    }
    std::array<double, C> acc{};
    double wsum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx) {
        const int r2 = dx * dx + dy * dy;
        if (r2 == 0 || r2 > radius * radius) continue;
        const int xx = x + dx, yy = y + dy;
        if (!usable(xx, yy)) continue;
        const std::size_t j = image.index(xx, yy);
        // r points from the neighbor to the pixel being filled.
        const double rx = -dx, ry = -dy;
        const double len = std::sqrt(static_cast<double>(r2));
        double dir = std::abs(rx * gx + ry * gy) / len;
        if (dir < 1e-6) dir = 1e-6;
        const double dst = 1.0 / r2;
        const double lev = 1.0 / (1.0 + std::abs(T[j] - tc));
        const double wt = dir * dst * lev;
        for (int c = 0; c < C; ++c) acc[static_cast<std::size_t>(c)] += wt * Traits::get(out[j], c);
        wsum += wt;
      }
    for (auto& a : acc) a /= wsum;
    out[i] = Traits::make(acc);
  };

  while (!heap.empty()) {
    const auto [t, idx] = heap.top();
    heap.pop();
    if (flag[idx] == Known) continue;
    flag[idx] = Known;
    const int x = static_cast<int>(idx % static_cast<std::uint32_t>(w));
    const int y = static_cast<int>(idx / static_cast<std::uint32_t>(w));
    const int nx[4] = {x, x - 1, x + 1, x};
    const int ny[4] = {y - 1, y, y, y + 1};
    for (int k = 0; k < 4; ++k) {
      const int xx = nx[k], yy = ny[k];
      if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
      const std::size_t j = image.index(xx, yy);
      if (flag[j] != Inside) continue;
      T[j] = std::min({solve(xx - 1, yy, xx, yy - 1), solve(xx + 1, yy, xx, yy - 1),
                       solve(xx - 1, yy, xx, yy + 1), solve(xx + 1, yy, xx, yy + 1)});
      fill(xx, yy);
      flag[j] = Band;
      heap.emplace(T[j], static_cast<std::uint32_t>(j));
    }
  }

  for (std::size_t i = 0; i < flag.size(); ++i)
    if (flag[i] == Inside) throw NothingToInpaintFrom("hole is cut off from every known pixel");
  return out;
}

// ---- model-backed inpainting ------------------------------------------------

enum class ScoreCrop { FullFrame, HoleBoundingBox };

struct InpaintRequestSpec {
  std::string prompt;
  int n_candidates = 10;
  std::int64_t seed = 0;
  int steps = 50;
  ScoreCrop crop = ScoreCrop::FullFrame;
  int telea_radius = 3;

  void validate() const {
    if (n_candidates < 1) throw InvalidConfig("n_candidates must be at least 1");
  }
};

struct InpaintOutcome {
  Frame frame;
  int chosen = -1;         // winning candidate, -1 after a fallback
  bool fell_back = false;  // adapter failed; component filled by Telea instead
  std::string failure;
};

// Index of the highest score, lowest index on ties.
inline int argmax_score(std::span<const double> scores) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i)
    if (scores[static_cast<std::size_t>(i)] > scores[static_cast<std::size_t>(best)]) best = i;
  return best;
}

inline ColorImage crop_image(const ColorImage& img, int x0, int y0, int x1, int y1) {
  ColorImage out(x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) out(x - x0, y - y0) = img(x, y);
  return out;
}

// Fills one hole component with the best of n generated candidates. Every
// hole still open in `frame` is sent as the request mask so the model never
// reads unfilled pixels; only the component's pixels are written back. On
// adapter failure the component is Telea-filled and the fallback reported.
inline InpaintOutcome external_inpaint(const Frame& frame, const Component& component,
                                       const InpaintRequestSpec& spec,
                                       adapters::ModelClient& client, int threads = 1) {
  spec.validate();
  InpaintOutcome result;
  result.frame = frame;
  if (component.pixels.empty()) return result;

  try {
    const int n = spec.n_candidates;
    std::vector<ColorImage> candidates(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n),
                 std::min(threads, client.config().in_flight_limit), [&](std::size_t i) {
                   adapters::InpaintRequest req{frame.color, frame.holes, spec.prompt,
                                                spec.seed + static_cast<std::int64_t>(i),
                                                spec.steps};
                   candidates[i] = client.inpaint_image(req);
                 });

    adapters::ScoreRequest score_req{{}, spec.prompt};
    if (spec.crop == ScoreCrop::HoleBoundingBox) {
      const int w = frame.width();
      int x0 = w, y0 = frame.height(), x1 = 0, y1 = 0;
      for (std::uint32_t p : component.pixels) {
        const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
        const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x + 1);
        y1 = std::max(y1, y + 1);
      }
      for (const auto& c : candidates) score_req.candidates.push_back(crop_image(c, x0, y0, x1, y1));
    } else {
      score_req.candidates = candidates;
    }
    const auto scores = client.score_candidates(score_req);
    result.chosen = argmax_score(scores);
    const ColorImage& winner = candidates[static_cast<std::size_t>(result.chosen)];
    for (std::uint32_t p : component.pixels) {
      result.frame.color[p] = winner[p];
      result.frame.holes[p] = 0;
      result.frame.provenance[p] = Provenance::External;
    }
    return result;
  } catch (const AdapterUnavailable& e) {
    result.failure = e.what();
  } catch (const ProtocolViolation& e) {
    result.failure = e.what();
  }

  result.fell_back = true;
  result.frame = frame;
  const Mask target = component_mask(component, frame.width(), frame.height());
  Mask others = frame.holes;
  for (std::uint32_t p : component.pixels) others[p] = 0;
  result.frame.color = telea_inpaint(frame.color, target, spec.telea_radius, &others);
  for (std::uint32_t p : component.pixels) {
    result.frame.holes[p] = 0;
    result.frame.provenance[p] = Provenance::Telea;
  }
  return result;
}

}  // namespace scene4d
