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
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <semaphore>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>

#include <nlohmann/json.hpp>

#include "scene4d/adapters/stub.hpp"
#include "scene4d/adapters/types.hpp"
#include "scene4d/adapters/wire.hpp"

namespace scene4d::adapters {

// Environment variable that redirects every remote capability to one service.
inline constexpr const char* kAdapterUrlEnv = "SCENE4D_ADAPTER_URL";

inline void apply_env_override(AdapterConfig& cfg) {
  const char* url = std::getenv(kAdapterUrlEnv);
  if (url == nullptr || *url == '\0') return;
  for (auto& e : cfg.endpoints)
    if (!e.stub) e.base_url = url;
}

// Front door for all model calls: routes each capability to its backend,
// bounds concurrent requests, retries unavailable services with exponential
// backoff (no jitter), and validates every response before it is returned.
class ModelClient {
 public:
  using Backends = std::array<std::shared_ptr<Backend>, kCapabilityCount>;

  explicit ModelClient(AdapterConfig cfg, StubOptions stub_options = {})
      : ModelClient(cfg, resolve(cfg, std::make_shared<StubBackend>(std::move(stub_options)))) {}

  ModelClient(AdapterConfig cfg, Backends backends) : cfg_(std::move(cfg)), backends_(std::move(backends)) {
    cfg_.validate();
    for (auto& s : slots_) s = std::make_unique<std::counting_semaphore<>>(cfg_.in_flight_limit);
    for (const auto& b : backends_)
      if (!b) throw InvalidConfig("capability without backend");
  }

  const AdapterConfig& config() const { return cfg_; }
  bool is_stub(Capability c) const { return cfg_.endpoint(c).stub; }

  std::vector<ColorImage> generate_video(const GenerateRequest& req) {
    req.validate();
    auto frames = call(Capability::Generate, [&](Backend& b) { return b.generate(req); });
    if (static_cast<int>(frames.size()) != req.num_frames)
      throw ProtocolViolation("generate returned the wrong number of frames");
    for (const auto& f : frames)
      if (f.width() != req.width || f.height() != req.height)
        throw ProtocolViolation("generate returned frames of the wrong size");
    return frames;
  }

  DepthResponse estimate_depth(std::span<const ColorImage> frames, DepthMode mode = DepthMode::Relative) {
    DepthRequest req{{frames.begin(), frames.end()}, mode};
    auto resp = call(Capability::Depth, [&](Backend& b) { return b.depth(req); });
    if (resp.depths.size() != frames.size())
      throw ProtocolViolation("depth returned the wrong number of maps");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& d = resp.depths[i];
      if (d.width() != frames[i].width() || d.height() != frames[i].height())
        throw ProtocolViolation("depth resolution does not match the frame");
      for (std::size_t p = 0; p < d.values.size(); ++p)
        if (d.valid[p] && !(d.values[p] > 0.0 && std::isfinite(d.values[p])))
          throw ProtocolViolation("depth values must be positive and finite");
    }
    return resp;
  }

  ColorImage inpaint_image(const InpaintRequest& req) {
    require_same_shape(req.image, req.mask, "inpaint request");
    auto img = call(Capability::Inpaint, [&](Backend& b) { return b.inpaint(req); });
    if (!img.same_shape(req.image)) throw ProtocolViolation("inpaint returned the wrong size");
    return img;
  }

  Mask segment_image(const SegmentRequest& req) {
    auto m = call(Capability::Segment, [&](Backend& b) { return b.segment(req); });
    if (!m.same_shape(req.image)) throw ProtocolViolation("segment returned the wrong size");
    return m;
  }

  std::vector<double> score_candidates(const ScoreRequest& req) {
    auto s = call(Capability::Score, [&](Backend& b) { return b.score(req); });
    if (s.size() != req.candidates.size()) throw ProtocolViolation("score count mismatch");
    for (double v : s)
      if (!std::isfinite(v)) throw ProtocolViolation("non-finite candidate score");
    return s;
  }

 private:
  static Backends resolve(const AdapterConfig& cfg, const std::shared_ptr<Backend>& stub) {
    Backends out;
    for (Capability c : kAllCapabilities) {
      const auto& e = cfg.endpoint(c);
      out[static_cast<std::size_t>(c)] =
          e.stub ? stub : std::make_shared<wire::HttpBackend>(e.base_url, cfg.timeout_s);
    }
    return out;
  }

  template <class Fn>
  std::invoke_result_t<Fn&, Backend&> call(Capability cap, Fn&& fn) {
    auto& slot = *slots_[static_cast<std::size_t>(cap)];
    Backend& backend = *backends_[static_cast<std::size_t>(cap)];
    double delay = cfg_.backoff_base_s;
    for (int attempt = 0;; ++attempt) {
      slot.acquire();
      try {
        auto out = fn(backend);
        slot.release();
        return out;
      } catch (const AdapterUnavailable&) {
        slot.release();
        if (attempt >= cfg_.retries) throw;
      } catch (const nlohmann::json::exception& e) {
        slot.release();
        throw ProtocolViolation(std::string("malformed response: ") + e.what());
      } catch (const FormatError& e) {
        slot.release();
        throw ProtocolViolation(std::string("malformed payload: ") + e.what());
      } catch (...) {
        slot.release();
        throw;
      }
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      delay *= cfg_.backoff_factor;
    }
  }

  AdapterConfig cfg_;
  Backends backends_;
  std::array<std::unique_ptr<std::counting_semaphore<>>, kCapabilityCount> slots_;
};

}  // namespace scene4d::adapters
