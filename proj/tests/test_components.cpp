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
#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "scene4d/components.hpp"

namespace scene4d {
namespace {

// Labels by breadth-first flood fill, returning each label's pixel set.
std::vector<std::set<std::uint32_t>> flood_fill_sets(const Mask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> label(m.size(), -1);
  std::vector<std::set<std::uint32_t>> out;
  for (int y0 = 0; y0 < h; ++y0)
    for (int x0 = 0; x0 < w; ++x0) {
      if (!m(x0, y0) || label[m.index(x0, y0)] >= 0) continue;
      const int id = static_cast<int>(out.size());
      out.emplace_back();
      std::vector<std::pair<int, int>> queue{{x0, y0}};
      label[m.index(x0, y0)] = id;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        const auto [x, y] = queue[q];
        out.back().insert(static_cast<std::uint32_t>(m.index(x, y)));
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int nx = x + dx, ny = y + dy;
          if (!m.contains(nx, ny) || !m(nx, ny) || label[m.index(nx, ny)] >= 0) continue;
          label[m.index(nx, ny)] = id;
          queue.emplace_back(nx, ny);
        }
      }
    }
  return out;
}

TEST(Components, MatchFloodFillOnRandomMasks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 40), h = 3 + static_cast<int>(rng() % 30);
    const double density = 0.2 + 0.1 * (trial % 6);
    std::bernoulli_distribution coin(density);
    Mask m(w, h, 0);
    for (auto& v : m.pixels()) v = coin(rng) ? 1 : 0;

    const auto got = connected_components(m);
    const auto want = flood_fill_sets(m);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      std::set<std::uint32_t> s(got[i].pixels.begin(), got[i].pixels.end());
      EXPECT_EQ(s.size(), got[i].area()) << "duplicate pixel";
      EXPECT_EQ(s, want[i]);
    }
  }
}

TEST(Components, OrderedByFirstPixel) {
  Mask m(6, 4, 0);
  m(4, 0) = 1;
  m(0, 1) = 1;
  m(0, 2) = 1;
  m(3, 3) = 1;
  const auto cs = connected_components(m);
  ASSERT_EQ(cs.size(), 3u);
  std::vector<std::uint32_t> firsts;
  for (const auto& c : cs) firsts.push_back(*std::min_element(c.pixels.begin(), c.pixels.end()));
  EXPECT_TRUE(std::is_sorted(firsts.begin(), firsts.end()));
  EXPECT_EQ(firsts.front(), 4u);
}

TEST(Components, DiagonalPixelsAreSeparate) {
  Mask m(3, 3, 0);
  m(0, 0) = m(1, 1) = m(2, 2) = 1;
  EXPECT_EQ(connected_components(m).size(), 3u);
}

TEST(Components, EmptyAndFullMasks) {
  EXPECT_TRUE(connected_components(Mask(7, 5, 0)).empty());
  const auto full = connected_components(Mask(7, 5, 1));
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(full[0].area(), 35u);
  EXPECT_EQ(component_mask(full[0], 7, 5), Mask(7, 5, 1));
}

}  // namespace
}  // namespace scene4d
