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

// Temporal routing of hole fills: background holes that were background and
// observed at the previous timestamp are copied from it; everything else goes
// to the generative inpainter (large) or to Telea (small).

#include <cstdint>
#include <string>
#include <vector>

#include "scene4d/adapters/client.hpp"
#include "scene4d/adapters/stub.hpp"
#include "scene4d/inpaint.hpp"

namespace scene4d {

enum class SegSource { Adapter, DepthThresholdStub };

struct SegMask {
  Mask foreground;
  SegSource source = SegSource::DepthThresholdStub;
  bool fell_back = false;  // adapter failed, stub rule used instead
};

struct SegmentOptions {
  double alpha = 0.35;
  std::string prompt;
};

// With no client, or a client whose segment capability is the in-process
// stub, applies the depth-threshold rule directly. Otherwise asks the service
// and falls back to the rule if it fails.
inline SegMask segment_fg(const Frame& frame, adapters::ModelClient* client,
                          const SegmentOptions& opts = {}) {
  if (client && !client->is_stub(adapters::Capability::Segment)) {
    try {
      adapters::SegmentRequest req{frame.color, frame.depth, opts.prompt};
      return {client->segment_image(req), SegSource::Adapter, false};
    } catch (const AdapterUnavailable&) {
    } catch (const ProtocolViolation&) {
    }
    return {adapters::depth_threshold_mask(frame.depth, opts.alpha), SegSource::DepthThresholdStub, true};
  }
  return {adapters::depth_threshold_mask(frame.depth, opts.alpha), SegSource::DepthThresholdStub, false};
}

enum class FillRoute : std::uint8_t { CopyPrevT, Telea, External };

struct FillEntry {
  FillRoute route = FillRoute::Telea;
  // Pixels this entry fills. For CopyPrevT these are also the source pixels:
  // the same camera at the previous timestamp.
  Component component;
};

struct FillPlan {
  std::vector<FillEntry> entries;

  std::size_t routed_area(FillRoute r) const {
    std::size_t a = 0;
    for (const auto& e : entries)
      if (e.route == r) a += e.component.area();
    return a;
  }
  std::size_t count(FillRoute r) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.route == r ? 1 : 0;
    return n;
  }
};

// Routing without temporal history (the first timestamp).
inline FillPlan plan_without_history(const HolePartition& holes) {
  FillPlan plan;
  for (const auto& c : holes.large) plan.entries.push_back({FillRoute::External, c});
  for (const auto& c : holes.small) plan.entries.push_back({FillRoute::Telea, c});
  return plan;
}

// A large component is copied from the previous timestamp when at least `rho`
// of its pixels are background now, were background before, and were observed
// then. Pixels of a copied component that the previous frame lacks are split
// off and routed by size. Small components always go to Telea.
inline FillPlan plan_fills(const HolePartition& holes, const SegMask& seg_t, const SegMask& seg_prev,
                           const Frame& frame_prev, double rho = 0.8) {
  FillPlan plan;
  const auto route_large = [&](const Component& c) {
    std::size_t stable = 0;
    for (std::uint32_t p : c.pixels)
      if (!seg_t.foreground[p] && !seg_prev.foreground[p] && !frame_prev.holes[p]) ++stable;
    if (!c.pixels.empty() && static_cast<double>(stable) >= rho * static_cast<double>(c.area())) {
      Component copy, rest;
      for (std::uint32_t p : c.pixels) (frame_prev.holes[p] ? rest : copy).pixels.push_back(p);
      plan.entries.push_back({FillRoute::CopyPrevT, std::move(copy)});
      if (!rest.pixels.empty())
        plan.entries.push_back(
            {rest.area() >= holes.threshold ? FillRoute::External : FillRoute::Telea, std::move(rest)});
      return;
    }
    plan.entries.push_back({FillRoute::External, c});
  };
  for (const auto& c : holes.large) route_large(c);
  for (const auto& c : holes.small) plan.entries.push_back({FillRoute::Telea, c});
  return plan;
}

struct ExecuteOptions {
  InpaintRequestSpec inpaint;
  int threads = 1;
};

struct ExecuteReport {
  std::size_t external_fallbacks = 0;
  std::vector<int> chosen_candidates;
};

// Runs the plan in route order: copies, then Telea, then external. Copies take
// color and depth; the other routes fill color only and leave depth invalid.
inline Frame execute_plan(const Frame& frame, const FillPlan& plan, const Frame* frame_prev,
                          adapters::ModelClient& client, const ExecuteOptions& opts,
                          ExecuteReport* report = nullptr) {
  Frame out = frame;
  for (const auto& e : plan.entries) {
    if (e.route != FillRoute::CopyPrevT) continue;
    if (!frame_prev) throw InvalidInput("copy route without a previous frame");
    for (std::uint32_t p : e.component.pixels) {
      if (frame_prev->holes[p]) throw InvalidInput("copy route reads a hole of the previous frame");
      out.color[p] = frame_prev->color[p];
      out.depth.values[p] = frame_prev->depth.values[p];
      out.depth.valid[p] = frame_prev->depth.valid[p];
      out.holes[p] = 0;
      out.provenance[p] = Provenance::CopiedPrevT;
    }
  }

  Mask telea_mask(frame.width(), frame.height(), 0);
  bool any_telea = false;
  for (const auto& e : plan.entries) {
    if (e.route != FillRoute::Telea) continue;
    for (std::uint32_t p : e.component.pixels) telea_mask[p] = 1;
    any_telea = any_telea || !e.component.pixels.empty();
  }
  if (any_telea) {
    // Holes left for the external route must not feed the Telea fill.
    Mask later = out.holes;
    for (std::size_t p = 0; p < later.size(); ++p) later[p] = later[p] && !telea_mask[p];
    out.color = telea_inpaint(out.color, telea_mask, opts.inpaint.telea_radius, &later);
    for (std::size_t p = 0; p < telea_mask.size(); ++p) {
      if (!telea_mask[p]) continue;
      out.holes[p] = 0;
      out.provenance[p] = Provenance::Telea;
    }
  }

  for (const auto& e : plan.entries) {
    if (e.route != FillRoute::External) continue;
    auto res = external_inpaint(out, e.component, opts.inpaint, client, opts.threads);
    out = std::move(res.frame);
    if (report) {
      report->external_fallbacks += res.fell_back ? 1 : 0;
      report->chosen_candidates.push_back(res.chosen);
    }
  }
  return out;
}

}  // namespace scene4d
