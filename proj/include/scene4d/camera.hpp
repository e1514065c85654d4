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
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "scene4d/errors.hpp"

namespace scene4d {

// Pinhole intrinsics. Continuous pixel coordinates put the center of pixel
// (x, y) at (x + 0.5, y + 0.5), so cx = width / 2 is the optical center.
struct Intrinsics {
  double fx = 1.0, fy = 1.0;
  double cx = 0.5, cy = 0.5;
  int width = 1, height = 1;

  void validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidConfig("focal lengths must be positive");
    if (width < 1 || height < 1) throw InvalidConfig("image size must be at least 1x1");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
      throw InvalidConfig("principal point outside the image");
  }

  friend bool operator==(const Intrinsics&, const Intrinsics&) = default;
};

inline Intrinsics make_intrinsics(double fov_h_deg, int width, int height) {
  if (!(fov_h_deg > 0.0 && fov_h_deg < 180.0))
    throw InvalidConfig("horizontal field of view must lie in (0, 180) degrees");
  if (width < 1 || height < 1) throw InvalidConfig("image size must be at least 1x1");
  const double half = fov_h_deg * std::numbers::pi / 360.0;
  Intrinsics k;
  k.fx = (width / 2.0) / std::tan(half);
  k.fy = k.fx;
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  k.width = width;
  k.height = height;
  return k;
}

// Rigid world-to-camera map: x_cam = rotation * x_world + translation.
class Pose {
 public:
  static constexpr double kTolerance = 1e-9;

  Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {
    const double ortho = (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity())
                             .cwiseAbs()
                             .maxCoeff();
    if (!(ortho <= kTolerance) || !(std::abs(rotation_.determinant() - 1.0) <= kTolerance))
      throw InvalidInput("pose rotation is not a proper orthonormal matrix");
    if (!translation_.allFinite()) throw InvalidInput("pose translation is not finite");
  }

  // Camera whose center sits at `center` and whose optical axis points at
  // `target`. Image y grows along world +y ("down").
  static Pose look_at(const Eigen::Vector3d& center, const Eigen::Vector3d& target,
                      const Eigen::Vector3d& down = Eigen::Vector3d::UnitY()) {
    const Eigen::Vector3d z = (target - center).normalized();
    const Eigen::Vector3d x = down.cross(z).normalized();
    const Eigen::Vector3d y = z.cross(x);
    Eigen::Matrix3d r;
    r.row(0) = x.transpose();
    r.row(1) = y.transpose();
    r.row(2) = z.transpose();
    return Pose(r, -r * center);
  }

  // 4x4 row-major homogeneous matrix, the serialized form.
  static Pose from_matrix(const Eigen::Matrix4d& m) {
    return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
  }
  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
  }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  Eigen::Vector3d center() const { return -rotation_.transpose() * translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return rotation_ * x + translation_; }

  Pose inverse() const {
    const Eigen::Matrix3d rt = rotation_.transpose();
    return Pose(rt, -rt * translation_);
  }

  // (a * b).apply(x) == a.apply(b.apply(x))
  friend Pose operator*(const Pose& a, const Pose& b) {
    return Pose(a.rotation_ * b.rotation_, a.rotation_ * b.translation_ + a.translation_);
  }

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.rotation_ == b.rotation_ && a.translation_ == b.translation_;
  }

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Map from camera-i coordinates to camera-j coordinates.
inline Pose relative_transform(const Pose& from, const Pose& to) {
  const Eigen::Matrix3d r = to.rotation() * from.rotation().transpose();
  return Pose(r, to.translation() - r * from.translation());
}

inline Eigen::Vector2d pixel_center(int x, int y) { return {x + 0.5, y + 0.5}; }

inline Eigen::Vector3d backproject(const Eigen::Vector2d& p, double z, const Intrinsics& k) {
  if (!(z > 0.0) || !std::isfinite(z)) throw InvalidDepth("backproject needs a positive finite depth");
  return {(p.x() - k.cx) * z / k.fx, (p.y() - k.cy) * z / k.fy, z};
}

struct Projection {
  Eigen::Vector2d pixel;
  double depth;
};

// std::nullopt means the point is at or behind the camera plane.
inline std::optional<Projection> project(const Eigen::Vector3d& x, const Intrinsics& k) {
  if (!(x.z() > 0.0)) return std::nullopt;
  return Projection{{k.fx * x.x() / x.z() + k.cx, k.fy * x.y() / x.z() + k.cy}, x.z()};
}

enum class TrajectoryKind { OrbitArc, LateralLine, CustomList };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::OrbitArc;
  int num_views = 25;
  double radius = 4.0;        // orbit-arc
  double total_angle = 40.0;  // orbit-arc, degrees, end to end
  double baseline = 1.0;      // lateral-line, end to end
  // Orbit center. Unset means (0, 0, radius), which places the arc through
  // the world origin looking down +z.
  std::optional<Eigen::Vector3d> look_at;
  std::vector<Pose> custom_poses;  // custom-list
};

struct CameraNetwork {
  Intrinsics intrinsics;
  std::vector<Pose> poses;
  int base_index = 0;

  int size() const { return static_cast<int>(poses.size()); }
  const Pose& base_pose() const { return poses.at(static_cast<std::size_t>(base_index)); }

  void validate() const {
    intrinsics.validate();
    if (poses.empty()) throw InvalidConfig("camera network has no views");
    if (base_index < 0 || base_index >= size()) throw InvalidConfig("base index out of range");
  }
};

// Poses are spaced evenly along the path. The view at base_index is the one
// that holds the source video; for orbit arcs it sits at angle zero, so with
// the default look_at its pose is the identity.
inline CameraNetwork build_trajectory(const TrajectorySpec& spec, double base_fraction,
                                      const Intrinsics& intrinsics) {
  if (spec.num_views < 1) throw InvalidConfig("trajectory needs at least one view");
  if (!(base_fraction >= 0.0 && base_fraction <= 1.0))
    throw InvalidConfig("base fraction must lie in [0, 1]");
  intrinsics.validate();

  CameraNetwork net;
  net.intrinsics = intrinsics;
  const int n = spec.num_views;
  net.base_index = static_cast<int>(std::lround(base_fraction * (n - 1)));
  net.poses.reserve(static_cast<std::size_t>(n));

  switch (spec.kind) {
    case TrajectoryKind::OrbitArc: {
      if (!(spec.radius > 0.0)) throw InvalidConfig("orbit radius must be positive");
      const Eigen::Vector3d target = spec.look_at.value_or(Eigen::Vector3d(0, 0, spec.radius));
      const double step = n > 1 ? spec.total_angle / (n - 1) : 0.0;
      for (int i = 0; i < n; ++i) {
        const double theta = (i - net.base_index) * step * std::numbers::pi / 180.0;
        const Eigen::Vector3d offset(-spec.radius * std::sin(theta), 0.0,
                                     -spec.radius * std::cos(theta));
        net.poses.push_back(Pose::look_at(target + offset, target));
      }
      break;
    }
    case TrajectoryKind::LateralLine: {
      const double spacing = n > 1 ? spec.baseline / (n - 1) : 0.0;
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d center((i - net.base_index) * spacing, 0.0, 0.0);
        net.poses.emplace_back(Eigen::Matrix3d::Identity(), -center);
      }
      break;
    }
    case TrajectoryKind::CustomList:
      if (static_cast<int>(spec.custom_poses.size()) != n)
        throw InvalidConfig("custom pose list length does not match num_views");
      net.poses = spec.custom_poses;
      break;
  }
  return net;
}

}  // namespace scene4d
