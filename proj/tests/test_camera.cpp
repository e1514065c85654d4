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
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "scene4d/camera.hpp"

namespace scene4d {
namespace {

Pose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Quaterniond q = Eigen::Quaterniond(u(rng), u(rng), u(rng), u(rng)).normalized();
  return Pose(q.toRotationMatrix(), Eigen::Vector3d(u(rng), u(rng), u(rng)) * 3.0);
}

TEST(Intrinsics, FromFieldOfView) {
  const Intrinsics k = make_intrinsics(90.0, 200, 100);
  EXPECT_NEAR(k.fx, 100.0, 1e-12);
  EXPECT_DOUBLE_EQ(k.fx, k.fy);
  EXPECT_DOUBLE_EQ(k.cx, 100.0);
  EXPECT_DOUBLE_EQ(k.cy, 50.0);
  EXPECT_THROW(make_intrinsics(0.0, 10, 10), InvalidConfig);
  EXPECT_THROW(make_intrinsics(180.0, 10, 10), InvalidConfig);
  EXPECT_THROW(make_intrinsics(60.0, 0, 10), InvalidConfig);
}

TEST(Pose, RejectsNonOrthonormalRotation) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r(0, 0) = 1.001;
  EXPECT_THROW(Pose(r, Eigen::Vector3d::Zero()), InvalidInput);
  r = Eigen::Matrix3d::Identity();
  r(2, 2) = -1.0;  // reflection
  EXPECT_THROW(Pose(r, Eigen::Vector3d::Zero()), InvalidInput);
}

TEST(Pose, MatrixRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const Pose p = random_pose(rng);
    EXPECT_TRUE(Pose::from_matrix(p.matrix()) == p);
    EXPECT_DOUBLE_EQ(p.matrix()(3, 3), 1.0);
  }
}

TEST(Pose, InverseAndCenter) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Pose p = random_pose(rng);
    EXPECT_LT(p.apply(p.center()).norm(), 1e-12);
    const Eigen::Vector3d x(0.3, -1.2, 2.5);
    EXPECT_LT((p.inverse().apply(p.apply(x)) - x).norm(), 1e-12);
  }
}

TEST(Pose, LookAtFacesTarget) {
  const Pose p = Pose::look_at({1.0, 0.5, -2.0}, {0.0, 0.0, 3.0});
  const Eigen::Vector3d in_cam = p.apply({0.0, 0.0, 3.0});
  EXPECT_NEAR(in_cam.x(), 0.0, 1e-12);
  EXPECT_NEAR(in_cam.y(), 0.0, 1e-12);
  EXPECT_GT(in_cam.z(), 0.0);
  EXPECT_TRUE(Pose::look_at(Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 5)) == Pose());
}

TEST(RelativeTransform, ComposesWorldToCamera) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Pose a = random_pose(rng), b = random_pose(rng);
    const Pose rel = relative_transform(a, b);
    const Eigen::Vector3d x(1.0, -0.5, 4.0);
    EXPECT_LT((rel.apply(a.apply(x)) - b.apply(x)).norm(), 1e-11);
  }
  const Pose a = random_pose(rng);
  const Pose id = relative_transform(a, a);
  EXPECT_LT((id.rotation() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_LT(id.translation().norm(), 1e-12);
}

TEST(Projection, BackprojectProjectRoundTrip) {
  const Intrinsics k = make_intrinsics(60.0, 160, 96);
  for (int y = 0; y < 96; y += 7)
    for (int x = 0; x < 160; x += 9) {
      const auto pr = project(backproject(pixel_center(x, y), 3.25, k), k);
      ASSERT_TRUE(pr.has_value());
      EXPECT_NEAR(pr->pixel.x(), x + 0.5, 1e-12);
      EXPECT_NEAR(pr->pixel.y(), y + 0.5, 1e-12);
      EXPECT_NEAR(pr->depth, 3.25, 1e-12);
    }
}

TEST(Projection, CenterPixelLiesOnOpticalAxisForOddSizes) {
  const Intrinsics k = make_intrinsics(60.0, 161, 97);
  const Eigen::Vector3d ray = backproject(pixel_center(80, 48), 1.0, k);
  EXPECT_NEAR(ray.x(), 0.0, 1e-15);
  EXPECT_NEAR(ray.y(), 0.0, 1e-15);
}

TEST(Projection, BehindCameraIsCulled) {
  const Intrinsics k = make_intrinsics(60.0, 16, 16);
  EXPECT_FALSE(project({0.0, 0.0, -1.0}, k).has_value());
  EXPECT_FALSE(project({0.0, 0.0, 0.0}, k).has_value());
  EXPECT_THROW(backproject({1.0, 1.0}, 0.0, k), InvalidDepth);
  EXPECT_THROW(backproject({1.0, 1.0}, -2.0, k), InvalidDepth);
  EXPECT_THROW(backproject({1.0, 1.0}, std::nan(""), k), InvalidDepth);
}

TEST(Trajectory, OrbitArcGeometry) {
  const Intrinsics k = make_intrinsics(60.0, 160, 96);
  TrajectorySpec spec;
  const CameraNetwork net = build_trajectory(spec, 0.5, k);
  ASSERT_EQ(net.size(), 25);
  EXPECT_EQ(net.base_index, 12);
  EXPECT_TRUE(net.base_pose() == Pose());
  const Eigen::Vector3d target(0.0, 0.0, spec.radius);
  for (int i = 0; i < net.size(); ++i) {
    const Pose& p = net.poses[static_cast<std::size_t>(i)];
    EXPECT_NEAR((p.center() - target).norm(), spec.radius, 1e-12);
    const Eigen::Vector3d t_cam = p.apply(target);
    EXPECT_NEAR(t_cam.x(), 0.0, 1e-12);
    EXPECT_NEAR(t_cam.y(), 0.0, 1e-12);
  }
  // Neighbouring views are total_angle / (n - 1) apart as seen from the target.
  const Eigen::Vector3d a = net.poses[0].center() - target;
  const Eigen::Vector3d b = net.poses[1].center() - target;
  EXPECT_NEAR(std::acos(a.normalized().dot(b.normalized())) * 180.0 / std::numbers::pi, 40.0 / 24.0, 1e-9);
  const Eigen::Vector3d first = net.poses.front().center() - target;
  const Eigen::Vector3d last = net.poses.back().center() - target;
  EXPECT_NEAR(std::acos(first.normalized().dot(last.normalized())) * 180.0 / std::numbers::pi, 40.0, 1e-9);
}

TEST(Trajectory, LateralLineAndBaseFraction) {
  const Intrinsics k = make_intrinsics(60.0, 32, 32);
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::LateralLine;
  spec.num_views = 5;
  spec.baseline = 2.0;
  const CameraNetwork net = build_trajectory(spec, 0.0, k);
  EXPECT_EQ(net.base_index, 0);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(net.poses[static_cast<std::size_t>(i)].center().x(), 0.5 * i, 1e-12);
  EXPECT_EQ(build_trajectory(spec, 1.0, k).base_index, 4);
  EXPECT_THROW(build_trajectory(spec, 1.5, k), InvalidConfig);
}

TEST(Trajectory, CustomListLengthMustMatch) {
  const Intrinsics k = make_intrinsics(60.0, 32, 32);
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::CustomList;
  spec.num_views = 2;
  spec.custom_poses = {Pose()};
  EXPECT_THROW(build_trajectory(spec, 0.0, k), InvalidConfig);
  spec.custom_poses.push_back(Pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 0, 0)));
  EXPECT_EQ(build_trajectory(spec, 0.0, k).size(), 2);
}

}  // namespace
}  // namespace scene4d
