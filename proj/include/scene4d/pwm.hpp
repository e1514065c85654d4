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
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "scene4d/camera.hpp"
#include "scene4d/frame.hpp"
#include "scene4d/parallel.hpp"

namespace scene4d {

// One source pixel landing in the target image.
struct Splat {
  std::uint32_t target;  // row-major target pixel index
  std::uint32_t source;  // row-major source pixel index
  double depth;          // target-camera depth
};

// Projects every usable source pixel into the target camera. Points behind the
// target camera or outside its image are dropped.
inline std::vector<Splat> project_splats(const Frame& src, const Pose& p_src, const Pose& p_dst,
                                         const Intrinsics& k, int threads = 1) {
  const Pose rel = relative_transform(p_src, p_dst);
  const int w = src.width();
  const int h = src.height();
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<Splat> per_pixel(src.color.size(), Splat{kNone, 0, 0.0});

  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = src.color.index(x, y);
      if (src.holes[i] || !src.depth.valid[i]) continue;
      const auto proj = project(rel.apply(backproject(pixel_center(x, y), src.depth.values[i], k)), k);
      if (!proj) continue;
      const double u = std::floor(proj->pixel.x());
      const double v = std::floor(proj->pixel.y());
      if (!(u >= 0.0 && v >= 0.0 && u < k.width && v < k.height)) continue;
      per_pixel[i] = Splat{static_cast<std::uint32_t>(v * k.width + u),
                           static_cast<std::uint32_t>(i), proj->depth};
    }
  });

  std::vector<Splat> splats;
  splats.reserve(per_pixel.size());
  for (const Splat& s : per_pixel)
    if (s.target != kNone) splats.push_back(s);
  return splats;
}

// Z-buffer resolution: per target pixel the splat with the smallest depth
// wins, equal depths go to the lower source index. This is a total order, so
// the result does not depend on the order of `splats`.
inline WarpedFrame resolve_splats(const Frame& src, std::span<const Splat> splats, int width,
                                  int height) {
  WarpedFrame out(width, height, Provenance::Warped);
  out.holes.fill(1);
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> winner(out.holes.size(), kNone);
  std::vector<double> zbuf(out.holes.size(), std::numeric_limits<double>::infinity());
  for (const Splat& s : splats) {
    double& z = zbuf[s.target];
    std::uint32_t& w = winner[s.target];
    if (s.depth < z || (s.depth == z && s.source < w)) {
      z = s.depth;
      w = s.source;
    }
  }
  for (std::size_t t = 0; t < winner.size(); ++t) {
    if (winner[t] == kNone) continue;
    out.color[t] = src.color[winner[t]];
    out.depth.set(t, zbuf[t]);
    out.holes[t] = 0;
  }
  return out;
}

// Forward depth-image-based warp: backproject, rigid transform, project, and
// splat each source pixel to the nearest target pixel.
inline WarpedFrame warp(const Frame& src, const Pose& p_src, const Pose& p_dst, const Intrinsics& k,
                        int threads = 1) {
  if (src.width() != k.width || src.height() != k.height)
    throw InvalidInput("warp source size does not match intrinsics");
  const auto splats = project_splats(src, p_src, p_dst, k, threads);
  return resolve_splats(src, splats, k.width, k.height);
}

// Pixels of the target that receive at least one splat.
inline Mask warp_coverage(const Frame& src, const Pose& p_src, const Pose& p_dst,
                          const Intrinsics& k, int threads = 1) {
  Mask covered(k.width, k.height, 0);
  for (const Splat& s : project_splats(src, p_src, p_dst, k, threads)) covered[s.target] = 1;
  return covered;
}

// Depths closer than this count as a tie in merge_warps.
inline constexpr double kMergeDepthTie = 1e-6;

// Per pixel the nearest candidate wins; candidates within kMergeDepthTie of
// the nearest depth are resolved in favor of the earliest in list order.
inline WarpedFrame merge_warps(std::span<const WarpedFrame> warps) {
  if (warps.empty()) throw InvalidInput("merge_warps needs at least one candidate");
  const int w = warps.front().width();
  const int h = warps.front().height();
  for (const auto& f : warps)
    if (f.width() != w || f.height() != h) throw InvalidInput("merge_warps dimension mismatch");

  WarpedFrame out = warps.front();
  for (std::size_t i = 0; i < out.holes.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : warps)
      if (!f.holes[i]) best = std::min(best, f.depth.values[i]);
    if (!std::isfinite(best)) continue;
    for (const auto& f : warps) {
      if (f.holes[i] || f.depth.values[i] - best >= kMergeDepthTie) continue;
      out.color[i] = f.color[i];
      out.depth.values[i] = f.depth.values[i];
      out.depth.valid[i] = f.depth.valid[i];
      out.holes[i] = 0;
      out.provenance[i] = f.provenance[i];
      break;
    }
  }
  return out;
}

struct PosedFrame {
  const Frame* frame;
  Pose pose;
};

// Fraction of target pixels covered after merging every completed view
// warped into the target.
inline double overlap(std::span<const PosedFrame> completed, const Pose& target,
                      const Intrinsics& k, int threads = 1) {
  if (completed.empty()) throw InvalidInput("overlap needs at least one completed view");
  Mask covered(k.width, k.height, 0);
  for (const auto& c : completed) {
    const Mask m = warp_coverage(*c.frame, c.pose, target, k, threads);
    for (std::size_t i = 0; i < m.size(); ++i) covered[i] |= m[i];
  }
  return static_cast<double>(popcount(covered)) / static_cast<double>(covered.size());
}

struct WarpStep {
  int target = 0;
  std::vector<int> sources;
  friend bool operator==(const WarpStep&, const WarpStep&) = default;
};

struct WarpSchedule {
  std::vector<WarpStep> steps;

  // Every non-base view is a target exactly once and only draws from the base
  // or earlier targets.
  void validate(const CameraNetwork& net) const {
    std::vector<char> done(static_cast<std::size_t>(net.size()), 0);
    done[static_cast<std::size_t>(net.base_index)] = 1;
    for (const auto& s : steps) {
      if (s.target < 0 || s.target >= net.size() || done[static_cast<std::size_t>(s.target)])
        throw InvalidInput("schedule target repeated or out of range");
      for (int src : s.sources)
        if (src < 0 || src >= net.size() || !done[static_cast<std::size_t>(src)])
          throw InvalidInput("schedule source not yet completed");
      done[static_cast<std::size_t>(s.target)] = 1;
    }
    if (static_cast<int>(steps.size()) != net.size() - 1)
      throw InvalidInput("schedule does not cover every view");
  }

  friend bool operator==(const WarpSchedule&, const WarpSchedule&) = default;
};

enum class ScheduleKind {
  // Greedy: always the uncompleted view the completed set covers least.
  FarthestMinOverlap,
  // Outward from the base by index distance; the overlap function is unused.
  NeighborFirst,
};

// Greedy scheduler. `overlap_fn(completed, target)` returns the coverage
// fraction of `target` given the completed view indices; `on_step(step)` runs
// after each choice, before the next overlap query, so callers can fill the
// chosen view and have later queries see it. Ties go to the view farther from
// the base by index, then to the lower index.
template <class OverlapFn, class OnStep>
WarpSchedule schedule(const CameraNetwork& net, OverlapFn&& overlap_fn, OnStep&& on_step,
                      ScheduleKind kind = ScheduleKind::FarthestMinOverlap) {
  net.validate();
  const int n = net.size();
  const int base = net.base_index;
  std::vector<int> completed{base};
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  done[static_cast<std::size_t>(base)] = 1;

  WarpSchedule out;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_overlap = 0.0;
    for (int v = 0; v < n; ++v) {
      if (done[static_cast<std::size_t>(v)]) continue;
      double score;
      if (kind == ScheduleKind::FarthestMinOverlap) {
        score = overlap_fn(std::as_const(completed), v);
      } else {
        score = static_cast<double>(std::abs(v - base));
      }
      bool better = best < 0 || score < best_overlap;
      if (!better && score == best_overlap) {
        const int d_v = std::abs(v - base);
        const int d_b = std::abs(best - base);
        better = d_v > d_b || (d_v == d_b && v < best);
      }
      if (better) {
        best = v;
        best_overlap = score;
      }
    }
    WarpStep s{best, completed};
    on_step(std::as_const(s));
    out.steps.push_back(std::move(s));
    completed.push_back(best);
    done[static_cast<std::size_t>(best)] = 1;
  }
  return out;
}

template <class OverlapFn>
WarpSchedule schedule(const CameraNetwork& net, OverlapFn&& overlap_fn,
                      ScheduleKind kind = ScheduleKind::FarthestMinOverlap) {
  return schedule(net, std::forward<OverlapFn>(overlap_fn), [](const WarpStep&) {}, kind);
}

}  // namespace scene4d
