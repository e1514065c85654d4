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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scene4d/camera.hpp"
#include "scene4d/depthproc.hpp"
#include "scene4d/frame.hpp"
#include "scene4d/pwm.hpp"

namespace scene4d::pipeline {

// How one cell was produced.
struct CellMeta {
  int step = -1;  // position in its timestamp's schedule; -1 for the base view
  std::vector<int> sources;
  std::size_t warped_holes = 0;  // hole pixels after merging, before any fill
  std::size_t copied_area = 0;
  std::size_t telea_area = 0;
  std::size_t external_area = 0;
  std::size_t external_fallbacks = 0;
  bool segment_fell_back = false;
  std::optional<AlignmentResult> alignment;  // base cells with relative depth

  friend bool operator==(const CellMeta& a, const CellMeta& b) {
    const auto same_alignment = [&] {
      if (a.alignment.has_value() != b.alignment.has_value()) return false;
      if (!a.alignment) return true;
      return a.alignment->gamma == b.alignment->gamma && a.alignment->beta == b.alignment->beta &&
             a.alignment->rms_residual == b.alignment->rms_residual &&
             a.alignment->n_pixels == b.alignment->n_pixels;
    };
    return a.step == b.step && a.sources == b.sources && a.warped_holes == b.warped_holes &&
           a.copied_area == b.copied_area && a.telea_area == b.telea_area &&
           a.external_area == b.external_area && a.external_fallbacks == b.external_fallbacks &&
           a.segment_fell_back == b.segment_fell_back && same_alignment();
  }
};

inline nlohmann::json to_json(const CellMeta& m) {
  nlohmann::json j = {{"step", m.step},
                      {"sources", m.sources},
                      {"warped_holes", m.warped_holes},
                      {"copied_area", m.copied_area},
                      {"telea_area", m.telea_area},
                      {"external_area", m.external_area},
                      {"external_fallbacks", m.external_fallbacks},
                      {"segment_fell_back", m.segment_fell_back}};
  if (m.alignment)
    j["alignment"] = {{"gamma", m.alignment->gamma},
                      {"beta", m.alignment->beta},
                      {"rms_residual", m.alignment->rms_residual},
                      {"n_pixels", m.alignment->n_pixels}};
  return j;
}

inline CellMeta cell_meta_from_json(const nlohmann::json& j) {
  CellMeta m;
  j.at("step").get_to(m.step);
  j.at("sources").get_to(m.sources);
  j.at("warped_holes").get_to(m.warped_holes);
  j.at("copied_area").get_to(m.copied_area);
  j.at("telea_area").get_to(m.telea_area);
  j.at("external_area").get_to(m.external_area);
  j.at("external_fallbacks").get_to(m.external_fallbacks);
  j.at("segment_fell_back").get_to(m.segment_fell_back);
  if (j.contains("alignment")) {
    const auto& a = j.at("alignment");
    AlignmentResult r;
    a.at("gamma").get_to(r.gamma);
    a.at("beta").get_to(r.beta);
    a.at("rms_residual").get_to(r.rms_residual);
    a.at("n_pixels").get_to(r.n_pixels);
    m.alignment = r;
  }
  return m;
}

// Every view of the camera network at every timestamp. Cells are stored only
// once complete: no holes and valid depth everywhere.
class ViewTimeMatrix {
 public:
  ViewTimeMatrix() = default;
  ViewTimeMatrix(CameraNetwork net, int timestamps)
      : net_(std::move(net)), timestamps_(timestamps) {
    net_.validate();
    if (timestamps < 1) throw InvalidConfig("matrix needs at least one timestamp");
    const auto n = static_cast<std::size_t>(views()) * static_cast<std::size_t>(timestamps);
    cells_.resize(n);
    meta_.resize(n);
    schedules.resize(static_cast<std::size_t>(timestamps));
  }

  const CameraNetwork& network() const { return net_; }
  int views() const { return net_.size(); }
  int timestamps() const { return timestamps_; }
  int width() const { return net_.intrinsics.width; }
  int height() const { return net_.intrinsics.height; }

  bool has(int v, int t) const { return cells_[slot(v, t)].has_value(); }

  const Frame& at(int v, int t) const {
    const auto& c = cells_[slot(v, t)];
    if (!c) throw IncompleteMatrix("cell (" + std::to_string(v) + ", " + std::to_string(t) + ") is missing");
    return *c;
  }
  const CellMeta& meta(int v, int t) const { return meta_[slot(v, t)]; }

  void set(int v, int t, Frame f, CellMeta m = {}) {
    if (f.width() != width() || f.height() != height())
      throw InvalidInput("cell size does not match the camera intrinsics");
    for (std::size_t i = 0; i < f.holes.size(); ++i)
      if (f.holes[i] || !f.depth.valid[i]) throw InvalidInput("cells must be complete");
    if (v == net_.base_index)
      for (std::size_t i = 0; i < f.provenance.size(); ++i)
        if (f.provenance[i] != Provenance::Original)
          throw InvalidInput("base view cells must be entirely original");
    cells_[slot(v, t)] = std::move(f);
    meta_[slot(v, t)] = std::move(m);
  }

  std::size_t completed() const {
    std::size_t n = 0;
    for (const auto& c : cells_) n += c.has_value();
    return n;
  }
  bool complete() const { return completed() == cells_.size(); }

  void require_complete() const {
    for (int t = 0; t < timestamps_; ++t)
      for (int v = 0; v < views(); ++v) (void)at(v, t);
  }

  // Warp order used for each timestamp.
  std::vector<WarpSchedule> schedules;
  // Free-form run description (effective config, source, seed).
  nlohmann::json info = nlohmann::json::object();

  friend bool operator==(const ViewTimeMatrix& a, const ViewTimeMatrix& b) {
    if (a.timestamps_ != b.timestamps_ || a.views() != b.views()) return false;
    if (!(a.net_.intrinsics == b.net_.intrinsics) || a.net_.base_index != b.net_.base_index)
      return false;
    for (int v = 0; v < a.views(); ++v)
      if (!(a.net_.poses[static_cast<std::size_t>(v)] == b.net_.poses[static_cast<std::size_t>(v)]))
        return false;
    if (a.schedules.size() != b.schedules.size()) return false;
    for (std::size_t t = 0; t < a.schedules.size(); ++t) {
      const auto& sa = a.schedules[t].steps;
      const auto& sb = b.schedules[t].steps;
      if (sa.size() != sb.size()) return false;
      for (std::size_t i = 0; i < sa.size(); ++i)
        if (sa[i].target != sb[i].target || sa[i].sources != sb[i].sources) return false;
    }
    return a.cells_ == b.cells_ && a.meta_ == b.meta_ && a.info == b.info;
  }

 private:
  std::size_t slot(int v, int t) const {
    if (v < 0 || v >= views() || t < 0 || t >= timestamps_)
      throw InvalidInput("cell index out of range");
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(views()) + static_cast<std::size_t>(v);
  }

  CameraNetwork net_;
  int timestamps_ = 0;
  std::vector<std::optional<Frame>> cells_;
  std::vector<CellMeta> meta_;
};

}  // namespace scene4d::pipeline
