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

// HTTP/JSON wire protocol for the model capabilities. Images travel as base64
// PNG, depth as base64 little-endian float32 with explicit width/height, masks
// as single-channel PNG with 255 = hole (inpaint) or foreground (segment).
// Errors come back as {"code", "message"} with a non-200 status.

#include <memory>
#include <string>
#include <utility>

// <resolv.h>, pulled in by httplib, defines a `_res` macro that breaks Eigen
// headers parsed after it.
#include <Eigen/Core>
#include <Eigen/Geometry>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "scene4d/adapters/types.hpp"
#include "scene4d/codec.hpp"

namespace scene4d::adapters::wire {

using nlohmann::json;

inline std::string path_for(Capability c) { return "/v1/" + std::string(capability_name(c)); }

inline json image_json(const ColorImage& img) { return codec::base64_encode(codec::encode_png(img)); }
inline ColorImage image_from(const json& j) {
  return codec::decode_png_rgb(codec::base64_decode(j.get<std::string>()));
}
inline json mask_json(const Mask& m) {
  return codec::base64_encode(codec::encode_png(codec::mask_to_image(m)));
}
inline Mask mask_from(const json& j) {
  return codec::image_to_mask(codec::decode_png_gray(codec::base64_decode(j.get<std::string>())));
}
inline json depth_json(const DepthMap& d) {
  return {{"width", d.width()}, {"height", d.height()},
          {"data", codec::base64_encode(codec::encode_f32(d))}};
}
inline DepthMap depth_from(const json& j) {
  const auto bytes = codec::base64_decode(j.at("data").get<std::string>());
  return codec::decode_f32(bytes.data(), bytes.size(), j.at("width").get<int>(),
                           j.at("height").get<int>());
}

inline json versioned(json j) {
  j["version"] = std::string(kProtocolVersion);
  return j;
}

inline void check_version(const json& j) {
  if (!j.is_object() || !j.contains("version"))
    throw ProtocolViolation("message lacks the mandatory version field");
  if (j.at("version") != std::string(kProtocolVersion))
    throw ProtocolViolation("protocol version mismatch: " + j.at("version").dump());
}

// ---- requests ---------------------------------------------------------------

inline json encode(const GenerateRequest& r) {
  return versioned({{"prompt", r.prompt}, {"augmentation", r.augmentation}, {"seed", r.seed},
                    {"num_frames", r.num_frames}, {"width", r.width}, {"height", r.height},
                    {"steps", r.steps}, {"guidance", r.guidance}});
}
inline GenerateRequest decode_generate(const json& j) {
  GenerateRequest r;
  r.prompt = j.at("prompt").get<std::string>();
  r.augmentation = j.value("augmentation", std::string{});
  r.seed = j.at("seed").get<std::int64_t>();
  r.num_frames = j.at("num_frames").get<int>();
  r.width = j.at("width").get<int>();
  r.height = j.at("height").get<int>();
  r.steps = j.value("steps", 50);
  r.guidance = j.value("guidance", 6.0);
  return r;
}

inline json encode(const DepthRequest& r) {
  json frames = json::array();
  for (const auto& f : r.frames) frames.push_back(image_json(f));
  return versioned({{"mode", r.mode == DepthMode::Metric ? "metric" : "relative"},
                    {"frames", std::move(frames)}});
}
inline DepthRequest decode_depth(const json& j) {
  DepthRequest r;
  const auto mode = j.value("mode", std::string("relative"));
  if (mode != "relative" && mode != "metric") throw ProtocolViolation("unknown depth mode " + mode);
  r.mode = mode == "metric" ? DepthMode::Metric : DepthMode::Relative;
  for (const auto& f : j.at("frames")) r.frames.push_back(image_from(f));
  return r;
}

inline json encode(const InpaintRequest& r) {
  return versioned({{"prompt", r.prompt}, {"seed", r.seed}, {"steps", r.steps},
                    {"image", image_json(r.image)}, {"mask", mask_json(r.mask)}});
}
inline InpaintRequest decode_inpaint(const json& j) {
  InpaintRequest r;
  r.prompt = j.value("prompt", std::string{});
  r.seed = j.value("seed", std::int64_t{0});
  r.steps = j.value("steps", 50);
  r.image = image_from(j.at("image"));
  r.mask = mask_from(j.at("mask"));
  return r;
}

inline json encode(const SegmentRequest& r) {
  json j = {{"prompt", r.prompt}, {"image", image_json(r.image)}};
  if (r.depth) j["depth"] = depth_json(*r.depth);
  return versioned(std::move(j));
}
inline SegmentRequest decode_segment(const json& j) {
  SegmentRequest r;
  r.prompt = j.value("prompt", std::string{});
  r.image = image_from(j.at("image"));
  if (j.contains("depth")) r.depth = depth_from(j.at("depth"));
  return r;
}

inline json encode(const ScoreRequest& r) {
  json c = json::array();
  for (const auto& img : r.candidates) c.push_back(image_json(img));
  return versioned({{"prompt", r.prompt}, {"candidates", std::move(c)}});
}
inline ScoreRequest decode_score(const json& j) {
  ScoreRequest r;
  r.prompt = j.value("prompt", std::string{});
  for (const auto& c : j.at("candidates")) r.candidates.push_back(image_from(c));
  return r;
}

// ---- server side ------------------------------------------------------------

struct Reply {
  int status = 200;
  json body;
};

inline Reply error_reply(int status, std::string code, std::string message) {
  return {status, {{"code", std::move(code)}, {"message", std::move(message)}}};
}

// Decodes one request, runs it on `backend`, and encodes the response or a
// typed error.
inline Reply handle(Backend& backend, Capability cap, const std::string& body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception& e) {
    return error_reply(400, "bad_request", e.what());
  }
  try {
    check_version(req);
  } catch (const ProtocolViolation& e) {
    return error_reply(400, "version_mismatch", e.what());
  }
  try {
    json out;
    switch (cap) {
      case Capability::Generate: {
        json frames = json::array();
        for (const auto& f : backend.generate(decode_generate(req))) frames.push_back(image_json(f));
        out = {{"frames", std::move(frames)}};
        break;
      }
      case Capability::Depth: {
        auto resp = backend.depth(decode_depth(req));
        json depths = json::array();
        for (const auto& d : resp.depths) depths.push_back(depth_json(d));
        out = {{"relative", resp.relative}, {"depths", std::move(depths)}};
        break;
      }
      case Capability::Inpaint:
        out = {{"image", image_json(backend.inpaint(decode_inpaint(req)))}};
        break;
      case Capability::Segment:
        out = {{"mask", mask_json(backend.segment(decode_segment(req)))}};
        break;
      case Capability::Score:
        out = {{"scores", backend.score(decode_score(req))}};
        break;
    }
    return {200, versioned(std::move(out))};
  } catch (const InvalidConfig& e) {
    return error_reply(400, "invalid_config", e.what());
  } catch (const AdapterUnavailable& e) {
    return error_reply(503, "unavailable", e.what());
  } catch (const json::exception& e) {
    return error_reply(400, "bad_request", e.what());
  } catch (const Error& e) {
    return error_reply(400, "bad_request", e.what());
  }
}

// Registers POST /v1/<capability> handlers serving `backend`, plus
// GET /v1/health.
inline void mount(httplib::Server& server, Backend& backend) {
  for (Capability cap : kAllCapabilities) {
    server.Post(path_for(cap), [&backend, cap](const httplib::Request& req, httplib::Response& res) {
      const Reply r = handle(backend, cap, req.body);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    });
  }
  server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    json caps = json::array();
    for (Capability c : kAllCapabilities) caps.push_back(std::string(capability_name(c)));
    res.set_content(json{{"status", "ok"}, {"capabilities", caps}}.dump(), "application/json");
  });
}

// ---- client side ------------------------------------------------------------

// Maps an error reply onto the typed error hierarchy.
[[noreturn]] inline void raise_error(int status, const std::string& body) {
  std::string code, message = body;
  try {
    const json j = json::parse(body);
    code = j.value("code", std::string{});
    message = j.value("message", body);
  } catch (const json::exception&) {
  }
  if (code == "unavailable" || status == 503 || status >= 500)
    throw AdapterUnavailable("model service unavailable (" + std::to_string(status) + "): " + message);
  if (code == "invalid_config") throw InvalidConfig(message);
  throw ProtocolViolation("model service rejected request (" + code + "): " + message);
}

class HttpBackend final : public Backend {
 public:
  HttpBackend(std::string base_url, double timeout_s)
      : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

  std::vector<ColorImage> generate(const GenerateRequest& req) override {
    const json j = post(Capability::Generate, encode(req));
    std::vector<ColorImage> out;
    for (const auto& f : j.at("frames")) out.push_back(image_from(f));
    return out;
  }
  DepthResponse depth(const DepthRequest& req) override {
    const json j = post(Capability::Depth, encode(req));
    DepthResponse out;
    out.relative = j.value("relative", false);
    for (const auto& d : j.at("depths")) out.depths.push_back(depth_from(d));
    return out;
  }
  ColorImage inpaint(const InpaintRequest& req) override {
    return image_from(post(Capability::Inpaint, encode(req)).at("image"));
  }
  Mask segment(const SegmentRequest& req) override {
    return mask_from(post(Capability::Segment, encode(req)).at("mask"));
  }
  std::vector<double> score(const ScoreRequest& req) override {
    return post(Capability::Score, encode(req)).at("scores").get<std::vector<double>>();
  }

 private:
  json post(Capability cap, const json& body) {
    httplib::Client cli(base_url_);
    const auto secs = static_cast<time_t>(timeout_s_);
    const auto usecs = static_cast<time_t>((timeout_s_ - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(path_for(cap), body.dump(), "application/json");
    if (!res)
      throw AdapterUnavailable("cannot reach " + base_url_ + path_for(cap) + ": " +
                               httplib::to_string(res.error()));
    if (res->status != 200) raise_error(res->status, res->body);
    json j;
    try {
      j = json::parse(res->body);
    } catch (const json::exception& e) {
      throw ProtocolViolation(std::string("response is not JSON: ") + e.what());
    }
    check_version(j);
    return j;
  }

  std::string base_url_;
  double timeout_s_;
};

}  // namespace scene4d::adapters::wire
