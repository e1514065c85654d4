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
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "scene4d/oracle.hpp"
#include "scene4d/parallel.hpp"
#include "scene4d/pipeline/matrix.hpp"

namespace scene4d::pipeline {

// PSNR over 8-bit RGB on the pixels where `use` is set; nullopt when the
// pixels are identical (infinite PSNR) or none are selected.
inline std::optional<double> psnr(const ColorImage& a, const ColorImage& b, const Mask& use,
                                  std::size_t* count = nullptr) {
  require_same_shape(a, b, "psnr images");
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!use[i]) continue;
    const double dr = a[i].r - b[i].r, dg = a[i].g - b[i].g, db = a[i].b - b[i].b;
    se += dr * dr + dg * dg + db * db;
    ++n;
  }
  if (count) *count = n;
  if (n == 0 || se == 0.0) return std::nullopt;
  const double mse = se / (3.0 * static_cast<double>(n));
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// |a & b| / |a | b|; 1 when both are empty.
inline double mask_iou(const Mask& a, const Mask& b) {
  require_same_shape(a, b, "iou masks");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Pixels a cell had to fill after warping: anything not original or warped.
inline Mask pre_inpaint_holes(const Frame& f) {
  Mask m(f.width(), f.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = (f.provenance[i] == Provenance::Original || f.provenance[i] == Provenance::Warped) ? 0 : 1;
  return m;
}

struct CellReport {
  int view = 0;
  int t = 0;
  std::optional<double> psnr;  // nullopt: infinite
  std::size_t compared_pixels = 0;
  std::optional<double> hole_iou;  // non-base cells only
  std::size_t holes = 0;
  std::size_t oracle_holes = 0;

  friend bool operator==(const CellReport&, const CellReport&) = default;
};

struct Summary {
  std::optional<double> min_psnr;  // nullopt: every cell infinite
  std::optional<double> mean_psnr;  // over finite cells
  std::size_t infinite_cells = 0;
  std::optional<double> min_iou;
  std::optional<double> mean_iou;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct VerifyReport {
  int views = 0;
  int timestamps = 0;
  bool complete = false;
  std::vector<CellReport> cells;
  std::vector<WarpSchedule> schedules;
  Summary summary;

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

inline VerifyReport verify(const ViewTimeMatrix& m, const oracle::SceneSpec& scene, int threads = 1) {
  m.require_complete();
  const CameraNetwork& net = m.network();
  const auto& k = net.intrinsics;
  VerifyReport r;
  r.views = m.views();
  r.timestamps = m.timestamps();
  r.complete = true;
  r.schedules = m.schedules;
  r.cells.resize(static_cast<std::size_t>(m.views()) * static_cast<std::size_t>(m.timestamps()));

  parallel_for(r.cells.size(), threads, [&](std::size_t idx) {
    const int t = static_cast<int>(idx / static_cast<std::size_t>(m.views()));
    const int v = static_cast<int>(idx % static_cast<std::size_t>(m.views()));
    const double time = oracle::unit_time(t, m.timestamps());
    const Pose& pose = net.poses[static_cast<std::size_t>(v)];
    const Frame& f = m.at(v, t);
    const auto truth = oracle::render_oracle(scene, pose, k, time);

    CellReport c;
    c.view = v;
    c.t = t;
    Mask use(f.width(), f.height(), 0);
    for (std::size_t i = 0; i < use.size(); ++i) {
      const Provenance p = f.provenance[i];
      use[i] = (p == Provenance::Original || p == Provenance::Warped || p == Provenance::CopiedPrevT) ? 1 : 0;
    }
    c.psnr = psnr(f.color, truth.frame.color, use, &c.compared_pixels);

    if (v != net.base_index) {
      const Mask holes = pre_inpaint_holes(f);
      Mask occluded(k.width, k.height, 1);
      for (int s : m.meta(v, t).sources) {
        const Mask o = oracle::occlusion_mask(scene, net.poses[static_cast<std::size_t>(s)], pose, k, time);
        for (std::size_t i = 0; i < occluded.size(); ++i) occluded[i] = occluded[i] && o[i];
      }
      c.holes = popcount(holes);
      c.oracle_holes = popcount(occluded);
      c.hole_iou = mask_iou(holes, occluded);
    }
    r.cells[idx] = c;
  });

  double psnr_sum = 0.0, iou_sum = 0.0;
  std::size_t psnr_n = 0, iou_n = 0;
  for (const auto& c : r.cells) {
    if (c.psnr) {
      r.summary.min_psnr = std::min(r.summary.min_psnr.value_or(*c.psnr), *c.psnr);
      psnr_sum += *c.psnr;
      ++psnr_n;
    } else {
      ++r.summary.infinite_cells;
    }
    if (c.hole_iou) {
      r.summary.min_iou = std::min(r.summary.min_iou.value_or(*c.hole_iou), *c.hole_iou);
      iou_sum += *c.hole_iou;
      ++iou_n;
    }
  }
  if (psnr_n) r.summary.mean_psnr = psnr_sum / static_cast<double>(psnr_n);
  if (iou_n) r.summary.mean_iou = iou_sum / static_cast<double>(iou_n);
  return r;
}

// ---- JSON -------------------------------------------------------------------

namespace detail {
inline nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
inline std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}
}  // namespace detail

inline nlohmann::json to_json(const VerifyReport& r) {
  using nlohmann::json;
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"view", c.view},
                     {"t", c.t},
                     {"psnr", detail::opt_json(c.psnr)},
                     {"compared_pixels", c.compared_pixels},
                     {"hole_iou", detail::opt_json(c.hole_iou)},
                     {"holes", c.holes},
                     {"oracle_holes", c.oracle_holes}});
  json schedules = json::array();
  for (const auto& s : r.schedules) {
    json steps = json::array();
    for (const auto& st : s.steps) steps.push_back({{"target", st.target}, {"sources", st.sources}});
    schedules.push_back(steps);
  }
  return {{"views", r.views},
          {"timestamps", r.timestamps},
          {"complete", r.complete},
          {"summary",
           {{"min_psnr", detail::opt_json(r.summary.min_psnr)},
            {"mean_psnr", detail::opt_json(r.summary.mean_psnr)},
            {"infinite_cells", r.summary.infinite_cells},
            {"min_iou", detail::opt_json(r.summary.min_iou)},
            {"mean_iou", detail::opt_json(r.summary.mean_iou)}}},
          {"schedules", schedules},
          {"cells", cells}};
}

inline VerifyReport report_from_json(const nlohmann::json& j) {
  try {
    VerifyReport r;
    j.at("views").get_to(r.views);
    j.at("timestamps").get_to(r.timestamps);
    j.at("complete").get_to(r.complete);
    const auto& s = j.at("summary");
    r.summary.min_psnr = detail::opt_from(s.at("min_psnr"));
    r.summary.mean_psnr = detail::opt_from(s.at("mean_psnr"));
    s.at("infinite_cells").get_to(r.summary.infinite_cells);
    r.summary.min_iou = detail::opt_from(s.at("min_iou"));
    r.summary.mean_iou = detail::opt_from(s.at("mean_iou"));
    for (const auto& sched : j.at("schedules")) {
      WarpSchedule ws;
      for (const auto& st : sched)
        ws.steps.push_back({st.at("target").get<int>(), st.at("sources").get<std::vector<int>>()});
      r.schedules.push_back(std::move(ws));
    }
    for (const auto& c : j.at("cells")) {
      CellReport cr;
      c.at("view").get_to(cr.view);
      c.at("t").get_to(cr.t);
      cr.psnr = detail::opt_from(c.at("psnr"));
      c.at("compared_pixels").get_to(cr.compared_pixels);
      cr.hole_iou = detail::opt_from(c.at("hole_iou"));
      c.at("holes").get_to(cr.holes);
      c.at("oracle_holes").get_to(cr.oracle_holes);
      r.cells.push_back(cr);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed verify report: ") + e.what());
  }
}

}  // namespace scene4d::pipeline
