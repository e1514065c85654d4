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

// Analytic test scenes: a textured background plane plus a few moving quads
// and spheres, rendered by exact per-pixel ray casting. Serves as ground truth
// for warps, occlusion masks and segmentation, and as an ML-free video source.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "scene4d/camera.hpp"
#include "scene4d/frame.hpp"

namespace scene4d::oracle {

// Smooth procedural color: a base color plus three seeded plane waves per
// channel over the surface's own (u, v) coordinates in world units.
struct Texture {
  std::array<double, 3> base{128.0, 128.0, 128.0};
  double amplitude = 50.0;
  // [channel][wave] = (freq_u, freq_v, phase)
  std::array<std::array<std::array<double, 3>, 3>, 3> waves{};

  static Texture seeded(std::uint64_t seed, std::array<double, 3> base, double amplitude,
                        double max_freq) {
    std::mt19937_64 rng(seed);
    const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Texture t;
    t.base = base;
    t.amplitude = amplitude;
    for (auto& channel : t.waves)
      for (auto& w : channel) {
        const double freq = max_freq * (0.3 + 0.7 * unit());
        const double angle = 2.0 * std::numbers::pi * unit();
        w = {freq * std::cos(angle), freq * std::sin(angle), 2.0 * std::numbers::pi * unit()};
      }
    return t;
  }

  Rgb sample(double u, double v) const {
    std::array<std::uint8_t, 3> c{};
    for (int ch = 0; ch < 3; ++ch) {
      double s = 0.0;
      for (const auto& w : waves[static_cast<std::size_t>(ch)])
        s += std::sin(2.0 * std::numbers::pi * (w[0] * u + w[1] * v) + w[2]);
      const double val = base[static_cast<std::size_t>(ch)] + amplitude * s / 3.0;
      c[static_cast<std::size_t>(ch)] =
          static_cast<std::uint8_t>(std::lround(std::clamp(val, 0.0, 255.0)));
    }
    return {c[0], c[1], c[2]};
  }
};

// Linear motion over unit time t in [0, 1].
struct Motion {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double yaw_deg = 0.0;  // rotation about world +y through the object center
};

struct Quad {
  Eigen::Vector3d center;
  double half_width = 0.5;
  double half_height = 0.5;
  Motion motion;
  Texture texture;
};

struct Sphere {
  Eigen::Vector3d center;
  double radius = 0.5;
  Motion motion;
  Texture texture;
};

// Background is the world plane z = depth, facing the cameras.
struct Background {
  double depth = 8.0;
  Texture texture;
};

struct SceneSpec {
  Background background;
  std::vector<Quad> quads;
  std::vector<Sphere> spheres;
  std::uint64_t seed = 0;
};

// Near textured quad sliding sideways in front of a far textured plane.
inline SceneSpec two_layer_scene(std::uint64_t seed) {
  SceneSpec s;
  s.seed = seed;
  s.background.depth = 16.0;
  s.background.texture = Texture::seeded(seed * 3 + 1, {120.0, 140.0, 110.0}, 60.0, 0.6);
  Quad q;
  q.center = Eigen::Vector3d(-0.5, 0.1, 4.0);
  q.half_width = 1.0;
  q.half_height = 0.875;
  q.motion.translation = Eigen::Vector3d(0.9, 0.0, 0.0);
  q.texture = Texture::seeded(seed * 3 + 2, {200.0, 90.0, 70.0}, 45.0, 0.9);
  s.quads.push_back(q);
  return s;
}

struct Hit {
  double depth;  // camera z of the hit
  Eigen::Vector3d point;
  Rgb color;
  bool object;
};

namespace detail {

inline Eigen::Matrix3d yaw(double deg) {
  return Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitY())
      .toRotationMatrix();
}

// Ray: origin + s * dir, where dir is scaled so that s equals camera depth.
inline void hit_background(const Background& bg, const Eigen::Vector3d& o,
                           const Eigen::Vector3d& dir, std::optional<Hit>& best) {
  if (dir.z() == 0.0) return;
  const double s = (bg.depth - o.z()) / dir.z();
  if (!(s > 0.0)) return;
  if (best && best->depth <= s) return;
  const Eigen::Vector3d p = o + s * dir;
  best = Hit{s, p, bg.texture.sample(p.x(), p.y()), false};
}

inline void hit_quad(const Quad& q, double t, const Eigen::Vector3d& o, const Eigen::Vector3d& dir,
                     std::optional<Hit>& best) {
  const Eigen::Vector3d c = q.center + t * q.motion.translation;
  const Eigen::Matrix3d r = yaw(t * q.motion.yaw_deg);
  const Eigen::Vector3d u = r.col(0), v = r.col(1), n = r.col(2);
  const double denom = n.dot(dir);
  if (denom == 0.0) return;
  const double s = n.dot(c - o) / denom;
  if (!(s > 0.0)) return;
  if (best && best->depth <= s) return;
  const Eigen::Vector3d p = o + s * dir;
  const double a = (p - c).dot(u), b = (p - c).dot(v);
  if (std::abs(a) > q.half_width || std::abs(b) > q.half_height) return;
  best = Hit{s, p, q.texture.sample(a, b), true};
}

inline void hit_sphere(const Sphere& sp, double t, const Eigen::Vector3d& o,
                       const Eigen::Vector3d& dir, std::optional<Hit>& best) {
  const Eigen::Vector3d c = sp.center + t * sp.motion.translation;
  const Eigen::Vector3d oc = o - c;
  const double a = dir.squaredNorm();
  const double b = 2.0 * oc.dot(dir);
  const double cc = oc.squaredNorm() - sp.radius * sp.radius;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  double s = (-b - sq) / (2.0 * a);
  if (!(s > 0.0)) s = (-b + sq) / (2.0 * a);
  if (!(s > 0.0)) return;
  if (best && best->depth <= s) return;
  const Eigen::Vector3d p = o + s * dir;
  const Eigen::Vector3d local = yaw(-t * sp.motion.yaw_deg) * (p - c);
  const double lon = std::atan2(local.x(), -local.z());
  const double lat = std::asin(std::clamp(local.y() / sp.radius, -1.0, 1.0));
  best = Hit{s, p, sp.texture.sample(lon * sp.radius, lat * sp.radius), true};
}

}  // namespace detail

// Nearest surface along the ray through continuous pixel `p` of a camera.
inline std::optional<Hit> cast(const SceneSpec& scene, const Pose& pose, const Intrinsics& k,
                               const Eigen::Vector2d& p, double t) {
  const Eigen::Vector3d d_cam((p.x() - k.cx) / k.fx, (p.y() - k.cy) / k.fy, 1.0);
  const Eigen::Vector3d dir = pose.rotation().transpose() * d_cam;
  const Eigen::Vector3d o = pose.center();
  std::optional<Hit> best;
  // Primitives visited back to front; the depth test keeps the nearest.
  detail::hit_background(scene.background, o, dir, best);
  for (const auto& q : scene.quads) detail::hit_quad(q, t, o, dir, best);
  for (const auto& s : scene.spheres) detail::hit_sphere(s, t, o, dir, best);
  return best;
}

struct OracleRender {
  Frame frame;
  Mask object_mask;  // 1 where a foreground object is visible
};

inline OracleRender render_oracle(const SceneSpec& scene, const Pose& pose, const Intrinsics& k,
                                  double t) {
  OracleRender out{Frame(k.width, k.height, Provenance::Original), Mask(k.width, k.height, 0)};
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x) {
      const std::size_t i = out.frame.color.index(x, y);
      const auto hit = cast(scene, pose, k, pixel_center(x, y), t);
      if (!hit) {
        out.frame.holes[i] = 1;
        continue;
      }
      out.frame.color[i] = hit->color;
      out.frame.depth.set(i, hit->depth);
      out.object_mask[i] = hit->object ? 1 : 0;
    }
  return out;
}

// Unit time of timestamp index i out of n.
inline double unit_time(int i, int n) { return n > 1 ? static_cast<double>(i) / (n - 1) : 0.0; }

inline std::vector<OracleRender> render_sequence(const SceneSpec& scene, const Pose& pose,
                                                 const Intrinsics& k, int num_frames) {
  std::vector<OracleRender> out;
  out.reserve(static_cast<std::size_t>(std::max(num_frames, 0)));
  for (int i = 0; i < num_frames; ++i) out.push_back(render_oracle(scene, pose, k, unit_time(i, num_frames)));
  return out;
}

// True where the destination view sees a surface point that the source view
// cannot: outside the source frustum or hidden behind nearer geometry.
inline Mask occlusion_mask(const SceneSpec& scene, const Pose& p_src, const Pose& p_dst,
                           const Intrinsics& k, double t) {
  Mask out(k.width, k.height, 0);
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x) {
      const auto hit = cast(scene, p_dst, k, pixel_center(x, y), t);
      if (!hit) continue;
      const auto proj = project(p_src.apply(hit->point), k);
      const std::size_t i = out.index(x, y);
      if (!proj || !(proj->pixel.x() >= 0.0 && proj->pixel.y() >= 0.0 &&
                     proj->pixel.x() < k.width && proj->pixel.y() < k.height)) {
        out[i] = 1;
        continue;
      }
      const auto seen = cast(scene, p_src, k, proj->pixel, t);
      if (!seen || std::abs(seen->depth - proj->depth) > 1e-6 * proj->depth) out[i] = 1;
    }
  return out;
}

}  // namespace scene4d::oracle
