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

#include <atomic>
#include <memory>

#include "scene4d/adapters/client.hpp"
#include "scene4d/adapters/stub.hpp"

namespace testing_support {

using namespace scene4d;
using namespace scene4d::adapters;

// Every call fails as if the service were down.
class DownBackend final : public Backend {
 public:
  std::atomic<int> calls{0};
  std::vector<ColorImage> generate(const GenerateRequest&) override { return fail<std::vector<ColorImage>>(); }
  DepthResponse depth(const DepthRequest&) override { return fail<DepthResponse>(); }
  ColorImage inpaint(const InpaintRequest&) override { return fail<ColorImage>(); }
  Mask segment(const SegmentRequest&) override { return fail<Mask>(); }
  std::vector<double> score(const ScoreRequest&) override { return fail<std::vector<double>>(); }

 private:
  template <class T>
  T fail() {
    ++calls;
    throw AdapterUnavailable("service down");
  }
};

// Stub behaviour, with per-candidate scores taken from a fixed list.
class ScoringBackend final : public Backend {
 public:
  explicit ScoringBackend(std::vector<double> scores) : scores_(std::move(scores)) {}
  std::vector<ColorImage> generate(const GenerateRequest& r) override { return stub_.generate(r); }
  DepthResponse depth(const DepthRequest& r) override { return stub_.depth(r); }
  ColorImage inpaint(const InpaintRequest& r) override {
    // Candidate i is a flat fill of value 10 * (seed % 20).
    ColorImage out = r.image;
    const auto v = static_cast<std::uint8_t>(10 * (r.seed % 20));
    for (std::size_t i = 0; i < out.size(); ++i)
      if (r.mask[i]) out[i] = {v, v, v};
    return out;
  }
  Mask segment(const SegmentRequest& r) override { return stub_.segment(r); }
  std::vector<double> score(const ScoreRequest& r) override {
    std::vector<double> s(r.candidates.size(), 0.0);
    for (std::size_t i = 0; i < s.size() && i < scores_.size(); ++i) s[i] = scores_[i];
    return s;
  }

 private:
  std::vector<double> scores_;
  StubBackend stub_;
};

inline AdapterConfig remote_config(double backoff = 0.0) {
  AdapterConfig cfg;
  for (auto& e : cfg.endpoints) {
    e.stub = false;
    e.base_url = "http://unused";
  }
  cfg.backoff_base_s = backoff;
  return cfg;
}

inline ModelClient::Backends all(std::shared_ptr<Backend> b) {
  ModelClient::Backends out;
  for (auto& slot : out) slot = b;
  return out;
}

}  // namespace testing_support
