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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scene4d/adapters/client.hpp"
#include "scene4d/adapters/stub.hpp"
#include "scene4d/cim.hpp"
#include "scene4d/depthproc.hpp"
#include "scene4d/inpaint.hpp"
#include "scene4d/oracle.hpp"
#include "scene4d/parallel.hpp"
#include "scene4d/pipeline/config.hpp"
#include "scene4d/pipeline/io.hpp"
#include "scene4d/pipeline/matrix.hpp"
#include "scene4d/pwm.hpp"
#include "scene4d/resample.hpp"

namespace scene4d::pipeline {

using SceneFactory = std::function<oracle::SceneSpec(std::uint64_t)>;

struct RunOptions {
  // Scene behind the oracle source and the generate stub.
  SceneFactory scene = oracle::two_layer_scene;
  // Cells taken as already built when their sources match.
  const ViewTimeMatrix* resume = nullptr;
  std::function<void(const ViewTimeMatrix&, int view, int t)> on_cell;
  std::function<void(const std::string&)> log;
  // Extra keys recorded in the matrix run description.
  nlohmann::json info = nlohmann::json::object();
};

inline adapters::StubOptions stub_options(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  adapters::StubOptions s;
  s.scene = opts.scene;
  s.fov_deg = cfg.fov_deg;
  s.relative_affine = cfg.stub_relative_affine;
  s.segment_alpha = cfg.segment_alpha;
  return s;
}

// Base-view video at working resolution with depth for every frame.
struct SourceVideo {
  std::vector<ColorImage> frames;
  std::vector<DepthMap> depths;
  std::vector<std::optional<AlignmentResult>> alignment;
};

inline void quantize_depth(DepthMap& d) {
  for (std::size_t i = 0; i < d.values.size(); ++i)
    if (d.valid[i]) d.set(i, static_cast<double>(static_cast<float>(d.values[i])));
}

// Fills invalid depth pixels. Small regions draw on all neighbours; large
// regions first try to draw only on background (pixels outside `foreground`).
inline DepthMap complete_depth(const DepthMap& depth, const Mask& foreground,
                               std::size_t large_threshold, int radius) {
  Mask missing(depth.width(), depth.height(), 0);
  for (std::size_t i = 0; i < missing.size(); ++i) missing[i] = depth.valid[i] ? 0 : 1;
  if (popcount(missing) == 0) return depth;
  if (popcount(missing) == missing.size()) throw NothingToInpaintFrom("depth map has no valid pixel");

  const auto parts = partition_holes(missing, large_threshold);
  const Mask small = [&] {
    Mask m(depth.width(), depth.height(), 0);
    for (const auto& c : parts.small)
      for (std::uint32_t p : c.pixels) m[p] = 1;
    return m;
  }();
  const Mask large = [&] {
    Mask m(depth.width(), depth.height(), 0);
    for (const auto& c : parts.large)
      for (std::uint32_t p : c.pixels) m[p] = 1;
    return m;
  }();

  Grid<double> values = depth.values;
  if (!parts.small.empty()) values = telea_inpaint(values, small, radius, &large);
  if (!parts.large.empty()) {
    Mask blocked(depth.width(), depth.height(), 0);
    for (std::size_t i = 0; i < blocked.size(); ++i)
      blocked[i] = (depth.valid[i] && foreground[i]) ? 1 : 0;
    try {
      values = telea_inpaint(values, large, radius, &blocked);
    } catch (const NothingToInpaintFrom&) {
      values = telea_inpaint(values, large, radius);
    }
  }
  DepthMap out = depth;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (missing[i]) out.set(i, values[i]);
  return out;
}

// Bilateral sharpening passes, hole completion and float quantization for a
// base-view depth map.
inline DepthMap prepare_base_depth(DepthMap d, const PipelineConfig& cfg) {
  const auto range = d.range();
  if (!range) throw InvalidInput("depth estimate has no valid pixel");
  const double span = range->second - range->first;
  if (span > 0.0)
    for (int size : cfg.bilateral_sizes)
      d = sharpen_depth(d, size, cfg.bilateral_sigma_space, cfg.bilateral_sigma_range * span, cfg.threads);
  d = complete_depth(d, Mask(d.width(), d.height(), 0), cfg.effective_hole_threshold(), cfg.telea_radius);
  quantize_depth(d);
  return d;
}

// Estimates depth for `frames`. A relative estimate is anchored to a metric
// estimate of the same frames by a per-frame affine fit.
inline void estimate_source_depth(SourceVideo& src, adapters::ModelClient& client) {
  auto rel = client.estimate_depth(src.frames, adapters::DepthMode::Relative);
  src.alignment.assign(src.frames.size(), std::nullopt);
  if (!rel.relative) {
    src.depths = std::move(rel.depths);
    return;
  }
  auto metric = client.estimate_depth(src.frames, adapters::DepthMode::Metric);
  src.depths.clear();
  for (std::size_t i = 0; i < src.frames.size(); ++i) {
    const Mask all(src.frames[i].width(), src.frames[i].height(), 1);
    try {
      const auto a = align_depth(rel.depths[i], metric.depths[i], all);
      src.depths.push_back(apply_alignment(rel.depths[i], a));
      src.alignment[i] = a;
    } catch (const SingularSystem&) {
      // A flat relative map carries no shape; keep the metric one.
      src.depths.push_back(std::move(metric.depths[i]));
    }
  }
}

inline SourceVideo ingest(const PipelineConfig& cfg, adapters::ModelClient& client,
                          const RunOptions& opts = {}) {
  const CameraNetwork net = cfg.network();
  SourceVideo src;
  switch (cfg.source) {
    case SourceKind::Oracle: {
      const auto scene = opts.scene(static_cast<std::uint64_t>(cfg.seed));
      for (auto& r : oracle::render_sequence(scene, net.base_pose(), net.intrinsics, cfg.timestamps)) {
        src.frames.push_back(std::move(r.frame.color));
        src.depths.push_back(std::move(r.frame.depth));
      }
      src.alignment.assign(src.frames.size(), std::nullopt);
      break;
    }
    case SourceKind::Prompt: {
      adapters::GenerateRequest req;
      req.prompt = cfg.prompt;
      req.seed = cfg.seed;
      req.num_frames = cfg.timestamps;
      req.width = cfg.generation_width();
      req.height = cfg.generation_height();
      req.steps = cfg.generate_steps;
      req.guidance = cfg.guidance;
      src.frames = client.generate_video(req);
      estimate_source_depth(src, client);
      break;
    }
    case SourceKind::Video: {
      const auto files = list_pngs(cfg.video_dir);
      if (files.size() < static_cast<std::size_t>(cfg.timestamps))
        throw InvalidInput("video has " + std::to_string(files.size()) + " frames, need " +
                           std::to_string(cfg.timestamps));
      for (int t = 0; t < cfg.timestamps; ++t) {
        auto img = codec::decode_png_rgb(read_bytes(files[static_cast<std::size_t>(t)]));
        if (!src.frames.empty() && !img.same_shape(src.frames.front()))
          throw InvalidInput("video frames differ in size");
        src.frames.push_back(std::move(img));
      }
      estimate_source_depth(src, client);
      break;
    }
  }
  for (std::size_t i = 0; i < src.frames.size(); ++i) {
    src.frames[i] = resize_area(src.frames[i], cfg.width, cfg.height);
    src.depths[i] = prepare_base_depth(resize_nearest(src.depths[i], cfg.width, cfg.height), cfg);
  }
  return src;
}

// Builds one non-base cell: warp every source, merge, route the holes, fill
// them, then complete and quantize depth.
inline Frame build_cell(const PipelineConfig& cfg, const ViewTimeMatrix& m, int view, int t,
                        const std::vector<int>& sources, adapters::ModelClient& client, CellMeta& meta) {
  const CameraNetwork& net = m.network();
  const Pose& target = net.poses[static_cast<std::size_t>(view)];

  std::vector<WarpedFrame> warps(sources.size());
  parallel_for(sources.size(), cfg.threads, [&](std::size_t i) {
    const int s = sources[i];
    warps[i] = warp(m.at(s, t), net.poses[static_cast<std::size_t>(s)], target, net.intrinsics, 1);
  });
  const WarpedFrame merged = merge_warps(warps);
  warps.clear();

  meta.sources = sources;
  meta.warped_holes = popcount(merged.holes);
  const auto parts = partition_holes(merged.holes, cfg.effective_hole_threshold());

  const SegmentOptions seg_opts{cfg.segment_alpha, cfg.prompt};
  const SegMask seg_t = segment_fg(merged, &client, seg_opts);
  meta.segment_fell_back = seg_t.fell_back;

  FillPlan plan;
  const Frame* prev = nullptr;
  if (t == 0) {
    plan = plan_without_history(parts);
  } else {
    prev = &m.at(view, t - 1);
    const SegMask seg_prev = segment_fg(*prev, &client, seg_opts);
    meta.segment_fell_back = meta.segment_fell_back || seg_prev.fell_back;
    plan = plan_fills(parts, seg_t, seg_prev, *prev, cfg.cim_rho);
  }
  meta.copied_area = plan.routed_area(FillRoute::CopyPrevT);
  meta.telea_area = plan.routed_area(FillRoute::Telea);
  meta.external_area = plan.routed_area(FillRoute::External);

  ExecuteOptions exec;
  exec.threads = cfg.threads;
  exec.inpaint.prompt = cfg.prompt;
  exec.inpaint.n_candidates = cfg.inpaint_candidates;
  exec.inpaint.steps = cfg.inpaint_steps;
  exec.inpaint.crop = cfg.score_crop;
  exec.inpaint.telea_radius = cfg.telea_radius;
  exec.inpaint.seed = cfg.seed + 1000003LL * (static_cast<std::int64_t>(t) * m.views() + view);
  ExecuteReport report;
  Frame out = execute_plan(merged, plan, prev, client, exec, &report);
  meta.external_fallbacks = report.external_fallbacks;

  out.depth = complete_depth(out.depth, seg_t.foreground, cfg.effective_hole_threshold(), cfg.telea_radius);
  quantize_depth(out.depth);
  return out;
}

// Fills the whole matrix from an ingested base video. Timestamps run in order
// and each reads only its own and the previous timestamp.
inline ViewTimeMatrix build(const PipelineConfig& cfg, const SourceVideo& src,
                            adapters::ModelClient& client, const RunOptions& opts = {}) {
  cfg.validate();
  const CameraNetwork net = cfg.network();
  if (src.frames.size() != static_cast<std::size_t>(cfg.timestamps))
    throw InvalidInput("source video length does not match the timestamp count");

  ViewTimeMatrix m(net, cfg.timestamps);
  m.info = opts.info;
  m.info["config"] = to_json(cfg);
  const int n = net.size();
  const int base = net.base_index;
  const auto pixels = static_cast<double>(cfg.width) * cfg.height;

  const auto reuse = [&](int v, int t, const std::vector<int>& sources) {
    return opts.resume && opts.resume->has(v, t) && opts.resume->meta(v, t).sources == sources;
  };
  const auto commit = [&](int v, int t, Frame f, CellMeta meta) {
    m.set(v, t, std::move(f), std::move(meta));
    if (opts.on_cell) opts.on_cell(m, v, t);
  };

  for (int t = 0; t < cfg.timestamps; ++t) {
    if (opts.log) opts.log("timestamp " + std::to_string(t + 1) + "/" + std::to_string(cfg.timestamps));
    if (reuse(base, t, {})) {
      commit(base, t, opts.resume->at(base, t), opts.resume->meta(base, t));
    } else {
      CellMeta meta;
      meta.alignment = src.alignment.empty() ? std::nullopt : src.alignment[static_cast<std::size_t>(t)];
      commit(base, t, Frame::original(src.frames[static_cast<std::size_t>(t)], src.depths[static_cast<std::size_t>(t)]),
             meta);
    }

    // Union of the coverage every completed view gives each pending target.
    std::vector<Mask> covered(static_cast<std::size_t>(n), Mask(cfg.width, cfg.height, 0));
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    const auto add_coverage = [&](int s) {
      done[static_cast<std::size_t>(s)] = 1;
      if (cfg.schedule_kind != ScheduleKind::FarthestMinOverlap) return;
      const Frame& f = m.at(s, t);
      parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t u) {
        if (done[u]) return;
        const Mask c = warp_coverage(f, net.poses[static_cast<std::size_t>(s)], net.poses[u], net.intrinsics, 1);
        Mask& acc = covered[u];
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] = acc[p] | c[p];
      });
    };
    add_coverage(base);

    const auto overlap_fn = [&](const std::vector<int>&, int v) {
      return static_cast<double>(popcount(covered[static_cast<std::size_t>(v)])) / pixels;
    };
    const auto on_step = [&](const WarpStep& step) {
      if (reuse(step.target, t, step.sources)) {
        commit(step.target, t, opts.resume->at(step.target, t), opts.resume->meta(step.target, t));
      } else {
        CellMeta meta;
        meta.step = static_cast<int>(m.schedules[static_cast<std::size_t>(t)].steps.size());
        Frame f = build_cell(cfg, m, step.target, t, step.sources, client, meta);
        commit(step.target, t, std::move(f), std::move(meta));
      }
      m.schedules[static_cast<std::size_t>(t)].steps.push_back(step);
      add_coverage(step.target);
    };
    // The scheduler's own record is identical to the one built in on_step.
    (void)schedule(net, overlap_fn, on_step, cfg.schedule_kind);
  }
  return m;
}

// A matrix holding only the base-view cells of an ingested video.
inline ViewTimeMatrix seed_matrix(const PipelineConfig& cfg, const SourceVideo& src,
                                  const nlohmann::json& info = nlohmann::json::object()) {
  ViewTimeMatrix m(cfg.network(), cfg.timestamps);
  m.info = info;
  m.info["config"] = to_json(cfg);
  const int base = m.network().base_index;
  for (int t = 0; t < cfg.timestamps; ++t) {
    const auto i = static_cast<std::size_t>(t);
    CellMeta meta;
    meta.alignment = src.alignment.empty() ? std::nullopt : src.alignment[i];
    m.set(base, t, Frame::original(src.frames[i], src.depths[i]), meta);
  }
  return m;
}

// The ingested video stored in a matrix's base-view cells.
inline SourceVideo source_from_matrix(const ViewTimeMatrix& m) {
  SourceVideo src;
  const int base = m.network().base_index;
  for (int t = 0; t < m.timestamps(); ++t) {
    src.frames.push_back(m.at(base, t).color);
    src.depths.push_back(m.at(base, t).depth);
    src.alignment.push_back(m.meta(base, t).alignment);
  }
  return src;
}

inline ViewTimeMatrix run(const PipelineConfig& cfg, adapters::ModelClient& client, const RunOptions& opts = {}) {
  cfg.validate();
  const SourceVideo src = ingest(cfg, client, opts);
  return build(cfg, src, client, opts);
}

}  // namespace scene4d::pipeline
