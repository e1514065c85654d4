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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scene4d/adapters/types.hpp"
#include "scene4d/camera.hpp"
#include "scene4d/inpaint.hpp"
#include "scene4d/pwm.hpp"

namespace scene4d::pipeline {

using nlohmann::json;

enum class SourceKind { Oracle, Prompt, Video };

namespace detail {

// Name table for an enum stored in config files. Unknown names are errors.
template <class E>
struct EnumNames;

template <>
struct EnumNames<SourceKind> {
  static constexpr std::array<std::pair<SourceKind, std::string_view>, 3> table = {
      {{SourceKind::Oracle, "oracle"}, {SourceKind::Prompt, "prompt"}, {SourceKind::Video, "video"}}};
};
template <>
struct EnumNames<TrajectoryKind> {
  static constexpr std::array<std::pair<TrajectoryKind, std::string_view>, 3> table = {
      {{TrajectoryKind::OrbitArc, "orbit-arc"},
       {TrajectoryKind::LateralLine, "lateral-line"},
       {TrajectoryKind::CustomList, "custom-list"}}};
};
template <>
struct EnumNames<ScoreCrop> {
  static constexpr std::array<std::pair<ScoreCrop, std::string_view>, 2> table = {
      {{ScoreCrop::FullFrame, "full-frame"}, {ScoreCrop::HoleBoundingBox, "hole-bbox"}}};
};
template <>
struct EnumNames<ScheduleKind> {
  static constexpr std::array<std::pair<ScheduleKind, std::string_view>, 2> table = {
      {{ScheduleKind::FarthestMinOverlap, "farthest"}, {ScheduleKind::NeighborFirst, "neighbor-first"}}};
};

template <class E>
std::string enum_name(E value) {
  for (const auto& [e, name] : EnumNames<E>::table)
    if (e == value) return std::string(name);
  throw InvalidConfig("enum value without a name");
}

template <class E>
E enum_from(const json& j, const char* what) {
  const auto text = j.get<std::string>();
  for (const auto& [e, name] : EnumNames<E>::table)
    if (name == text) return e;
  std::string choices;
  for (const auto& entry : EnumNames<E>::table)
    choices += (choices.empty() ? "" : ", ") + std::string(entry.second);
  throw InvalidConfig("unknown " + std::string(what) + " '" + text + "' (expected one of " + choices + ")");
}

}  // namespace detail

struct PipelineConfig {
  SourceKind source = SourceKind::Oracle;
  std::string prompt = "a red panel sliding in front of a textured wall";
  std::string video_dir;

  TrajectorySpec trajectory;
  double base_fraction = 0.5;
  double fov_deg = 60.0;
  int timestamps = 49;

  // Working resolution. Sources are resampled to it on ingest.
  int width = 720;
  int height = 480;
  // Generation resolution for the prompt source; 0 means the working size.
  int source_width = 0;
  int source_height = 0;
  int generate_steps = 50;
  double guidance = 6.0;

  std::size_t hole_threshold = 64;  // px^2 at 160x96, scaled with pixel count
  std::vector<int> bilateral_sizes = {3, 5};
  double bilateral_sigma_space = 1.0;
  double bilateral_sigma_range = 0.05;  // fraction of each frame's depth range

  double cim_rho = 0.8;
  double segment_alpha = 0.35;

  int inpaint_candidates = 10;
  int inpaint_steps = 50;
  int telea_radius = 3;
  ScoreCrop score_crop = ScoreCrop::FullFrame;
  ScheduleKind schedule_kind = ScheduleKind::FarthestMinOverlap;

  adapters::AdapterConfig adapters;
  // The stub depth backend answers relative-mode requests through (gamma, beta).
  std::optional<std::pair<double, double>> stub_relative_affine;

  std::string output_dir = "scene4d_out";
  std::int64_t seed = 0;
  int threads = 1;

  std::size_t effective_hole_threshold() const {
    return scaled_hole_threshold(hole_threshold, width, height);
  }

  int generation_width() const { return source_width > 0 ? source_width : width; }
  int generation_height() const { return source_height > 0 ? source_height : height; }

  Intrinsics intrinsics() const { return make_intrinsics(fov_deg, width, height); }

  CameraNetwork network() const { return build_trajectory(trajectory, base_fraction, intrinsics()); }

  void validate() const {
    if (timestamps < 1) throw InvalidConfig("timestamps must be at least 1");
    if (width < 1 || height < 1) throw InvalidConfig("working resolution must be at least 1x1");
    if (source_width < 0 || source_height < 0) throw InvalidConfig("source size must be >= 0");
    if (source == SourceKind::Video && video_dir.empty())
      throw InvalidConfig("video source needs an input directory");
    for (int s : bilateral_sizes)
      if (s < 1 || s % 2 == 0) throw InvalidConfig("bilateral sizes must be odd");
    if (!(bilateral_sigma_space > 0.0) || !(bilateral_sigma_range > 0.0))
      throw InvalidConfig("bilateral sigmas must be positive");
    if (!(cim_rho > 0.0 && cim_rho <= 1.0)) throw InvalidConfig("cim rho must lie in (0, 1]");
    if (!(segment_alpha > 0.0 && segment_alpha < 1.0))
      throw InvalidConfig("segment alpha must lie in (0, 1)");
    if (inpaint_candidates < 1) throw InvalidConfig("inpaint candidates must be at least 1");
    if (telea_radius < 1) throw InvalidConfig("telea radius must be at least 1");
    if (threads < 1) throw InvalidConfig("threads must be at least 1");
    if (hole_threshold < 1) throw InvalidConfig("hole threshold must be at least 1");
    if (stub_relative_affine && stub_relative_affine->first == 0.0)
      throw InvalidConfig("relative affine scale must be non-zero");
    adapters.validate();
    network().validate();
  }
};

inline json pose_json(const Pose& p) {
  const Eigen::Matrix4d m = p.matrix();
  json rows = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rows.push_back(m(r, c));
  return rows;
}

inline Pose pose_from_json(const json& j) {
  if (!j.is_array() || j.size() != 16) throw FormatError("pose must be 16 numbers");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j.at(static_cast<std::size_t>(r * 4 + c)).get<double>();
  return Pose::from_matrix(m);
}

inline json to_json(const PipelineConfig& c) {
  json traj = {{"kind", detail::enum_name(c.trajectory.kind)},
               {"num_views", c.trajectory.num_views},
               {"radius", c.trajectory.radius},
               {"total_angle", c.trajectory.total_angle},
               {"baseline", c.trajectory.baseline}};
  if (c.trajectory.look_at) {
    const auto& l = *c.trajectory.look_at;
    traj["look_at"] = {l.x(), l.y(), l.z()};
  }
  if (!c.trajectory.custom_poses.empty()) {
    json poses = json::array();
    for (const auto& p : c.trajectory.custom_poses) poses.push_back(pose_json(p));
    traj["custom_poses"] = poses;
  }
  json endpoints = json::object();
  for (adapters::Capability cap : adapters::kAllCapabilities) {
    const auto& e = c.adapters.endpoint(cap);
    endpoints[std::string(adapters::capability_name(cap))] = e.stub ? json("stub") : json(e.base_url);
  }
  json j = {{"source", detail::enum_name(c.source)},
            {"prompt", c.prompt},
            {"video_dir", c.video_dir},
            {"trajectory", traj},
            {"base_fraction", c.base_fraction},
            {"fov_deg", c.fov_deg},
            {"timestamps", c.timestamps},
            {"width", c.width},
            {"height", c.height},
            {"source_width", c.source_width},
            {"source_height", c.source_height},
            {"generate_steps", c.generate_steps},
            {"guidance", c.guidance},
            {"hole_threshold", c.hole_threshold},
            {"bilateral_sizes", c.bilateral_sizes},
            {"bilateral_sigma_space", c.bilateral_sigma_space},
            {"bilateral_sigma_range", c.bilateral_sigma_range},
            {"cim_rho", c.cim_rho},
            {"segment_alpha", c.segment_alpha},
            {"inpaint_candidates", c.inpaint_candidates},
            {"inpaint_steps", c.inpaint_steps},
            {"telea_radius", c.telea_radius},
            {"score_crop", detail::enum_name(c.score_crop)},
            {"schedule", detail::enum_name(c.schedule_kind)},
            {"adapters",
             {{"endpoints", endpoints},
              {"timeout_s", c.adapters.timeout_s},
              {"retries", c.adapters.retries},
              {"in_flight_limit", c.adapters.in_flight_limit},
              {"backoff_base_s", c.adapters.backoff_base_s},
              {"backoff_factor", c.adapters.backoff_factor}}},
            {"output_dir", c.output_dir},
            {"seed", c.seed},
            {"threads", c.threads}};
  if (c.stub_relative_affine)
    j["stub_relative_affine"] = {c.stub_relative_affine->first, c.stub_relative_affine->second};
  return j;
}

// Overlays the keys present in `j` onto `c`. Absent keys keep their value and
// unknown keys are rejected.
inline void merge_json(PipelineConfig& c, const json& j) {
  if (!j.is_object()) throw InvalidConfig("config must be a JSON object");
  static const std::vector<std::string> known = {
      "source", "prompt", "video_dir", "trajectory", "base_fraction", "fov_deg", "timestamps",
      "width", "height", "source_width", "source_height", "generate_steps", "guidance",
      "hole_threshold", "bilateral_sizes", "bilateral_sigma_space", "bilateral_sigma_range",
      "cim_rho", "segment_alpha", "inpaint_candidates", "inpaint_steps", "telea_radius",
      "score_crop", "schedule", "adapters", "output_dir", "seed", "threads",
      "stub_relative_affine"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw InvalidConfig("unknown config key: " + item.key());
  try {
    const auto get = [](const json& obj, const char* key, auto& field) {
      if (obj.contains(key)) obj.at(key).get_to(field);
    };
    if (j.contains("source")) c.source = detail::enum_from<SourceKind>(j.at("source"), "source");
    get(j, "prompt", c.prompt);
    get(j, "video_dir", c.video_dir);
    if (j.contains("trajectory")) {
      const auto& t = j.at("trajectory");
      if (t.contains("kind")) c.trajectory.kind = detail::enum_from<TrajectoryKind>(t.at("kind"), "trajectory kind");
      get(t, "num_views", c.trajectory.num_views);
      get(t, "radius", c.trajectory.radius);
      get(t, "total_angle", c.trajectory.total_angle);
      get(t, "baseline", c.trajectory.baseline);
      if (t.contains("look_at")) {
        const auto v = t.at("look_at").get<std::vector<double>>();
        if (v.size() != 3) throw InvalidConfig("look_at must have three components");
        c.trajectory.look_at = Eigen::Vector3d(v[0], v[1], v[2]);
      }
      if (t.contains("custom_poses")) {
        c.trajectory.custom_poses.clear();
        for (const auto& p : t.at("custom_poses")) c.trajectory.custom_poses.push_back(pose_from_json(p));
      }
    }
    get(j, "base_fraction", c.base_fraction);
    get(j, "fov_deg", c.fov_deg);
    get(j, "timestamps", c.timestamps);
    get(j, "width", c.width);
    get(j, "height", c.height);
    get(j, "source_width", c.source_width);
    get(j, "source_height", c.source_height);
    get(j, "generate_steps", c.generate_steps);
    get(j, "guidance", c.guidance);
    get(j, "hole_threshold", c.hole_threshold);
    get(j, "bilateral_sizes", c.bilateral_sizes);
    get(j, "bilateral_sigma_space", c.bilateral_sigma_space);
    get(j, "bilateral_sigma_range", c.bilateral_sigma_range);
    get(j, "cim_rho", c.cim_rho);
    get(j, "segment_alpha", c.segment_alpha);
    get(j, "inpaint_candidates", c.inpaint_candidates);
    get(j, "inpaint_steps", c.inpaint_steps);
    get(j, "telea_radius", c.telea_radius);
    if (j.contains("score_crop")) c.score_crop = detail::enum_from<ScoreCrop>(j.at("score_crop"), "score crop");
    if (j.contains("schedule"))
      c.schedule_kind = detail::enum_from<ScheduleKind>(j.at("schedule"), "schedule");
    if (j.contains("adapters")) {
      const auto& a = j.at("adapters");
      if (a.contains("endpoints")) {
        for (adapters::Capability cap : adapters::kAllCapabilities) {
          const std::string name(adapters::capability_name(cap));
          if (!a.at("endpoints").contains(name)) continue;
          const auto v = a.at("endpoints").at(name).get<std::string>();
          auto& e = c.adapters.endpoint(cap);
          e.stub = v == "stub";
          e.base_url = e.stub ? std::string{} : v;
        }
      }
      get(a, "timeout_s", c.adapters.timeout_s);
      get(a, "retries", c.adapters.retries);
      get(a, "in_flight_limit", c.adapters.in_flight_limit);
      get(a, "backoff_base_s", c.adapters.backoff_base_s);
      get(a, "backoff_factor", c.adapters.backoff_factor);
    }
    get(j, "output_dir", c.output_dir);
    get(j, "seed", c.seed);
    get(j, "threads", c.threads);
    if (j.contains("stub_relative_affine")) {
      const auto v = j.at("stub_relative_affine").get<std::vector<double>>();
      if (v.size() != 2) throw InvalidConfig("stub_relative_affine must be [gamma, beta]");
      c.stub_relative_affine = std::pair{v[0], v[1]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bad config value: ") + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidConfig(std::string("bad config value: ") + e.what());
  } catch (const FormatError& e) {
    throw InvalidConfig(std::string("bad config value: ") + e.what());
  }
}

inline PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  merge_json(c, j);
  return c;
}

}  // namespace scene4d::pipeline
