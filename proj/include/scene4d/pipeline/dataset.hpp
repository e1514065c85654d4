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

// On-disk dataset layout:
//   manifest.json                    sizes, schedules, per-cell metadata
//   cameras.json                     intrinsics and world-to-camera poses
//   frames/cam{v:03}/t{t:03}.png     RGB
//   depth/cam{v:03}/t{t:03}.f32      "PS4D" header + little-endian float32
//   provenance/cam{v:03}/t{t:03}.png one byte per pixel, the provenance code

#include <cstdio>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "scene4d/codec.hpp"
#include "scene4d/pipeline/config.hpp"
#include "scene4d/pipeline/io.hpp"
#include "scene4d/pipeline/matrix.hpp"

namespace scene4d::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kDatasetFormat = "scene4d-dataset";
inline constexpr int kDatasetFormatVersion = 1;

inline std::string cell_stem(int v, int t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cam%03d/t%03d", v, t);
  return buf;
}

inline fs::path frame_path(const fs::path& root, int v, int t) { return root / "frames" / (cell_stem(v, t) + ".png"); }
inline fs::path depth_path(const fs::path& root, int v, int t) { return root / "depth" / (cell_stem(v, t) + ".f32"); }
inline fs::path provenance_path(const fs::path& root, int v, int t) {
  return root / "provenance" / (cell_stem(v, t) + ".png");
}

inline json cameras_json(const CameraNetwork& net) {
  const auto& k = net.intrinsics;
  json poses = json::array();
  for (std::size_t v = 0; v < net.poses.size(); ++v)
    poses.push_back({{"view", v}, {"world_to_camera", pose_json(net.poses[v])}});
  return {{"intrinsics",
           {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}}},
          {"base_index", net.base_index},
          {"poses", poses}};
}

inline CameraNetwork network_from_json(const json& j) {
  CameraNetwork net;
  const auto& k = j.at("intrinsics");
  k.at("fx").get_to(net.intrinsics.fx);
  k.at("fy").get_to(net.intrinsics.fy);
  k.at("cx").get_to(net.intrinsics.cx);
  k.at("cy").get_to(net.intrinsics.cy);
  k.at("width").get_to(net.intrinsics.width);
  k.at("height").get_to(net.intrinsics.height);
  j.at("base_index").get_to(net.base_index);
  for (const auto& p : j.at("poses")) net.poses.push_back(pose_from_json(p.at("world_to_camera")));
  net.validate();
  return net;
}

inline json manifest_json(const ViewTimeMatrix& m) {
  json schedules = json::array();
  for (const auto& s : m.schedules) {
    json steps = json::array();
    for (const auto& st : s.steps) steps.push_back({{"target", st.target}, {"sources", st.sources}});
    schedules.push_back(steps);
  }
  json cells = json::array();
  for (int t = 0; t < m.timestamps(); ++t)
    for (int v = 0; v < m.views(); ++v)
      if (m.has(v, t)) {
        json c = to_json(m.meta(v, t));
        c["view"] = v;
        c["t"] = t;
        const auto hist = m.at(v, t).provenance_histogram();
        json h = json::object();
        for (int p = 0; p < kProvenanceCount; ++p)
          h[std::string(provenance_name(static_cast<Provenance>(p)))] = hist[static_cast<std::size_t>(p)];
        c["provenance_histogram"] = h;
        cells.push_back(c);
      }
  std::int64_t seed = 0;
  if (m.info.contains("config") && m.info.at("config").contains("seed"))
    seed = m.info.at("config").at("seed").get<std::int64_t>();
  return {{"format", kDatasetFormat},
          {"version", kDatasetFormatVersion},
          {"seed", seed},
          {"views", m.views()},
          {"timestamps", m.timestamps()},
          {"width", m.width()},
          {"height", m.height()},
          {"complete", m.complete()},
          {"info", m.info},
          {"schedules", schedules},
          {"cells", cells}};
}

inline void write_cell(const fs::path& root, const ViewTimeMatrix& m, int v, int t) {
  const Frame& f = m.at(v, t);
  write_bytes(frame_path(root, v, t), codec::encode_png(f.color));
  write_bytes(depth_path(root, v, t), codec::encode_depth_file(f.depth));
  Grid<std::uint8_t> prov(f.width(), f.height(), 0);
  for (std::size_t i = 0; i < prov.size(); ++i) prov[i] = static_cast<std::uint8_t>(f.provenance[i]);
  write_bytes(provenance_path(root, v, t), codec::encode_png(prov));
}

// Writes the metadata files only; cells are written with write_cell.
inline void write_state(const fs::path& root, const ViewTimeMatrix& m) {
  write_text(root / "cameras.json", cameras_json(m.network()).dump(2));
  write_text(root / "manifest.json", manifest_json(m).dump(2));
}

inline void export_dataset(const ViewTimeMatrix& m, const fs::path& root) {
  m.require_complete();
  for (int t = 0; t < m.timestamps(); ++t)
    for (int v = 0; v < m.views(); ++v) write_cell(root, m, v, t);
  write_state(root, m);
}

inline Frame read_cell(const fs::path& root, int v, int t, int width, int height) {
  for (const auto& p : {frame_path(root, v, t), depth_path(root, v, t), provenance_path(root, v, t)})
    if (!fs::exists(p)) throw MissingCell("missing file for cell (" + std::to_string(v) + ", " +
                                          std::to_string(t) + "): " + p.string());
  Frame f;
  f.color = codec::decode_png_rgb(read_bytes(frame_path(root, v, t)));
  f.depth = codec::decode_depth_file(read_bytes(depth_path(root, v, t)));
  const auto prov = codec::decode_png_gray(read_bytes(provenance_path(root, v, t)));
  if (f.color.width() != width || f.color.height() != height || f.depth.width() != width ||
      f.depth.height() != height || prov.width() != width || prov.height() != height)
    throw FormatError("cell (" + std::to_string(v) + ", " + std::to_string(t) + ") has the wrong size");
  f.provenance = Grid<Provenance>(width, height, Provenance::Original);
  f.holes = Mask(width, height, 0);
  for (std::size_t i = 0; i < prov.size(); ++i) {
    if (prov[i] >= kProvenanceCount) throw FormatError("unknown provenance code " + std::to_string(prov[i]));
    f.provenance[i] = static_cast<Provenance>(prov[i]);
    if (!f.depth.valid[i]) throw FormatError("cell has a pixel without valid depth");
  }
  return f;
}

// Loads a dataset and checks every invariant. With `allow_partial`, cells the
// manifest does not list are left empty instead of raising IncompleteMatrix.
inline ViewTimeMatrix import_dataset(const fs::path& root, bool allow_partial = false) {
  if (!fs::exists(root / "manifest.json")) throw MissingCell("no manifest.json in " + root.string());
  try {
    const json manifest = json::parse(read_text(root / "manifest.json"));
    const json cameras = json::parse(read_text(root / "cameras.json"));
    if (manifest.at("format") != kDatasetFormat || manifest.at("version") != kDatasetFormatVersion)
      throw FormatError("unsupported dataset format");
    ViewTimeMatrix m(network_from_json(cameras), manifest.at("timestamps").get<int>());
    if (manifest.at("views").get<int>() != m.views() || manifest.at("width").get<int>() != m.width() ||
        manifest.at("height").get<int>() != m.height())
      throw FormatError("manifest disagrees with cameras.json");
    m.info = manifest.at("info");
    const auto& schedules = manifest.at("schedules");
    if (schedules.size() != m.schedules.size()) throw FormatError("schedule count mismatch");
    for (std::size_t t = 0; t < schedules.size(); ++t)
      for (const auto& st : schedules[t])
        m.schedules[t].steps.push_back({st.at("target").get<int>(), st.at("sources").get<std::vector<int>>()});
    for (const auto& c : manifest.at("cells")) {
      const int v = c.at("view").get<int>();
      const int t = c.at("t").get<int>();
      if (v < 0 || v >= m.views() || t < 0 || t >= m.timestamps()) throw FormatError("cell index out of range");
      m.set(v, t, read_cell(root, v, t, m.width(), m.height()), cell_meta_from_json(c));
    }
    if (!allow_partial) m.require_complete();
    for (std::size_t t = 0; t < m.schedules.size(); ++t)
      if (m.has(m.network().base_index, static_cast<int>(t)) && m.schedules[t].steps.size() + 1 ==
                                                                    static_cast<std::size_t>(m.views()))
        m.schedules[t].validate(m.network());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset metadata: ") + e.what());
  } catch (const InvalidConfig& e) {
    throw FormatError(e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(e.what());
  }
}

}  // namespace scene4d::pipeline
