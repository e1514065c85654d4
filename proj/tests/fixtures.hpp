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

// Seeded inputs shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "oracles/telea.hpp"
#include "scene4d/camera.hpp"
#include "scene4d/cim.hpp"
#include "scene4d/oracle.hpp"
#include "scene4d/pwm.hpp"

namespace fixtures {

using namespace scene4d;

inline const Intrinsics kK = make_intrinsics(60.0, 160, 96);

// Fronto-parallel textured wall at depth z and nothing else.
inline oracle::SceneSpec plane_scene(double z) {
  oracle::SceneSpec s;
  s.background.depth = z;
  s.background.texture = oracle::Texture::seeded(3, {128.0, 128.0, 128.0}, 60.0, 0.5);
  return s;
}

inline CameraNetwork arc(int n, double total_angle, const Intrinsics& k = kK) {
  TrajectorySpec spec;
  spec.num_views = n;
  spec.total_angle = total_angle;
  return build_trajectory(spec, 0.5, k);
}

inline Mask not_holes(const Frame& f) {
  Mask m(f.width(), f.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = f.holes[i] ? 0 : 1;
  return m;
}

inline Mask random_mask(int w, int h, double keep, std::mt19937_64& rng) {
  std::bernoulli_distribution b(keep);
  Mask m(w, h, 0);
  for (auto& p : m.pixels()) p = b(rng) ? 1 : 0;
  return m;
}

// ---- telea --------------------------------------------------------------------

inline ColorImage smooth_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng) * 0.5, b = u(rng) * 0.5, c = u(rng) * 6.0;
  ColorImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double s = std::sin(a * x + b * y + c);
      img(x, y) = {static_cast<std::uint8_t>(128 + 100 * s), static_cast<std::uint8_t>(30 + 7 * x % 200),
                   static_cast<std::uint8_t>(255 - 9 * y % 256)};
    }
  return img;
}

inline Mask random_blobs(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> xs(0, w - 1), ys(0, h - 1), rs(1, 4);
  Mask m(w, h, 0);
  const int blobs = 1 + static_cast<int>(rng() % 4);
  for (int b = 0; b < blobs; ++b) {
    const int cx = xs(rng), cy = ys(rng), r = rs(rng);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m(x, y) = 1;
  }
  // Keep at least one known pixel.
  m[0] = 0;
  return m;
}

inline oracles::RefImage to_ref(const ColorImage& img) {
  oracles::RefImage r{img.width(), img.height(), {}};
  for (const auto& p : img.pixels()) r.px.push_back({double(p.r), double(p.g), double(p.b)});
  return r;
}

inline std::vector<std::uint8_t> bytes(const Mask& m) { return {m.pixels().begin(), m.pixels().end()}; }

struct TeleaCase {
  ColorImage image;
  Mask mask;
  int radius = 3;
};

inline TeleaCase telea_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int w = 20 + static_cast<int>(seed % 7), h = 14 + static_cast<int>(seed % 5);
  TeleaCase c;
  c.image = smooth_image(w, h, rng);
  c.mask = random_blobs(w, h, rng);
  c.radius = 2 + static_cast<int>(seed % 3);
  return c;
}

// Largest per-channel difference between the native fill and the reference.
inline int telea_max_deviation(const TeleaCase& c) {
  const ColorImage got = telea_inpaint(c.image, c.mask, c.radius);
  const auto ref = oracles::reference_telea(to_ref(c.image), bytes(c.mask), c.radius);
  int worst = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    worst = std::max(worst, static_cast<int>(std::abs(got[i].r - ref.px[i][0])));
    worst = std::max(worst, static_cast<int>(std::abs(got[i].g - ref.px[i][1])));
    worst = std::max(worst, static_cast<int>(std::abs(got[i].b - ref.px[i][2])));
    if (!c.mask[i] && !(got[i] == c.image[i])) worst = std::max(worst, 256);
  }
  return worst;
}

// ---- scheduling ---------------------------------------------------------------

// Every completion order of the non-base views, ranked by the stepwise key
// (overlap, farther from base first, lower index). Returns the best order and
// the number of orders tried.
template <class OverlapFn>
std::pair<std::vector<int>, int> brute_force_order(const CameraNetwork& net, OverlapFn overlap_of) {
  std::vector<int> order;
  for (int v = 0; v < net.size(); ++v)
    if (v != net.base_index) order.push_back(v);
  std::vector<std::tuple<double, int, int>> best_key;
  std::vector<int> best_order;
  int permutations = 0;
  do {
    ++permutations;
    std::vector<int> completed{net.base_index};
    std::vector<std::tuple<double, int, int>> key;
    for (int v : order) {
      key.emplace_back(overlap_of(completed, v), -std::abs(v - net.base_index), v);
      completed.push_back(v);
    }
    if (best_order.empty() || key < best_key) {
      best_key = key;
      best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return {best_order, permutations};
}

// ---- cim ----------------------------------------------------------------------

constexpr int kCimW = 40, kCimH = 30;

inline void punch(Frame& f, int x0, int y0, int x1, int y1) {
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const std::size_t i = f.color.index(x, y);
      f.holes[i] = 1;
      f.color[i] = {};
      f.depth.invalidate(i);
      f.provenance[i] = Provenance::Warped;
    }
}

inline Frame textured(int seed, double depth) {
  Frame f(kCimW, kCimH, Provenance::Warped);
  for (int y = 0; y < kCimH; ++y)
    for (int x = 0; x < kCimW; ++x) {
      f.color(x, y) = {static_cast<std::uint8_t>(4 * x + seed), static_cast<std::uint8_t>(6 * y),
                       static_cast<std::uint8_t>(90 + seed)};
      f.depth.set(f.color.index(x, y), depth + 0.01 * x);
    }
  return f;
}

// Three holes: a large one over stable background (copy), a large one over a
// region that was foreground in the previous frame (external) and a small
// crack (telea).
struct CimFixture {
  Frame cur = textured(0, 10.0);
  Frame prev = textured(7, 10.0);
  SegMask seg_cur{Mask(kCimW, kCimH, 0)};
  SegMask seg_prev{Mask(kCimW, kCimH, 0)};
  HolePartition holes;

  CimFixture() {
    punch(cur, 2, 2, 12, 10);
    punch(cur, 20, 2, 30, 10);
    punch(cur, 5, 20, 8, 23);
    for (int y = 0; y < 12; ++y)
      for (int x = 18; x < 32; ++x) seg_prev.foreground(x, y) = 1;
    holes = partition_holes(cur.holes, 64);
  }
};

}  // namespace fixtures
