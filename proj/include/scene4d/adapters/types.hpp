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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scene4d/depth_map.hpp"
#include "scene4d/grid.hpp"

namespace scene4d::adapters {

inline constexpr std::string_view kProtocolVersion = "v1";

enum class Capability { Generate = 0, Depth, Inpaint, Segment, Score };
inline constexpr int kCapabilityCount = 5;
inline constexpr std::array<Capability, kCapabilityCount> kAllCapabilities = {
    Capability::Generate, Capability::Depth, Capability::Inpaint, Capability::Segment,
    Capability::Score};

inline constexpr std::string_view capability_name(Capability c) {
  constexpr std::array<std::string_view, kCapabilityCount> names = {"generate", "depth", "inpaint",
                                                                     "segment", "score"};
  return names[static_cast<std::size_t>(c)];
}

// Appended to every generation prompt so the source video keeps a fixed camera.
inline constexpr std::string_view kStationaryCameraPrompt =
    "The camera remains stationary, with a fixed frame, stable composition, and no shifts.";

struct GenerateRequest {
  std::string prompt;
  std::string augmentation{kStationaryCameraPrompt};
  std::int64_t seed = 0;
  int num_frames = 49;
  int width = 720;
  int height = 480;
  int steps = 50;
  double guidance = 6.0;

  void validate() const {
    if (num_frames < 1) throw InvalidConfig("num_frames must be at least 1");
    if (width < 1 || height < 1) throw InvalidConfig("generate size must be at least 1x1");
    if (steps < 1) throw InvalidConfig("steps must be at least 1");
  }
  std::string full_prompt() const {
    return augmentation.empty() ? prompt : prompt + " " + augmentation;
  }
};

enum class DepthMode { Relative, Metric };

struct DepthRequest {
  std::vector<ColorImage> frames;
  DepthMode mode = DepthMode::Relative;
};

struct DepthResponse {
  std::vector<DepthMap> depths;
  // Depth known only up to an affine map; needs a metric anchor before use.
  bool relative = false;
};

struct InpaintRequest {
  ColorImage image;
  Mask mask;  // 1 = fill
  std::string prompt;
  std::int64_t seed = 0;
  int steps = 50;
};

struct SegmentRequest {
  ColorImage image;
  std::optional<DepthMap> depth;
  std::string prompt;
};

struct ScoreRequest {
  std::vector<ColorImage> candidates;
  std::string prompt;
};

// One model service. Real and stub backends are interchangeable per
// capability; implementations must be callable from several threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::vector<ColorImage> generate(const GenerateRequest& req) = 0;
  virtual DepthResponse depth(const DepthRequest& req) = 0;
  virtual ColorImage inpaint(const InpaintRequest& req) = 0;
  virtual Mask segment(const SegmentRequest& req) = 0;
  virtual std::vector<double> score(const ScoreRequest& req) = 0;
};

struct Endpoint {
  bool stub = true;
  std::string base_url;  // used when stub is false
};

struct AdapterConfig {
  std::array<Endpoint, kCapabilityCount> endpoints{};
  double timeout_s = 30.0;
  int retries = 2;
  int in_flight_limit = 4;
  double backoff_base_s = 0.5;
  double backoff_factor = 2.0;

  Endpoint& endpoint(Capability c) { return endpoints[static_cast<std::size_t>(c)]; }
  const Endpoint& endpoint(Capability c) const { return endpoints[static_cast<std::size_t>(c)]; }

  void validate() const {
    if (retries < 0) throw InvalidConfig("adapter retries must be >= 0");
    if (in_flight_limit < 1) throw InvalidConfig("adapter in-flight limit must be >= 1");
    if (!(timeout_s > 0.0)) throw InvalidConfig("adapter timeout must be positive");
    if (backoff_base_s < 0.0 || backoff_factor < 1.0) throw InvalidConfig("invalid backoff");
    for (Capability c : kAllCapabilities) {
      const auto& e = endpoint(c);
      if (!e.stub && e.base_url.empty())
        throw InvalidConfig(std::string("no backend for capability ") +
                            std::string(capability_name(c)));
    }
  }
};

}  // namespace scene4d::adapters
