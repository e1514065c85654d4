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
// scene4d command-line tool: init, build, export, verify, all, oracle,
// serve-stub. Exit codes: 0 ok, 1 other failure, 2 configuration error,
// 3 adapter unavailable, 4 incomplete matrix.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "scene4d/scene4d.hpp"

#include <CLI11.hpp>

namespace {

using namespace scene4d;
using namespace scene4d::pipeline;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAdapter = 3;
constexpr int kExitIncomplete = 4;

bool quiet = false;

void log_line(const std::string& s) {
  if (!quiet) std::cerr << "scene4d: " << s << "\n";
}

// Command-line flags that mirror PipelineConfig. Each flag that was given is
// written into a JSON overlay with the same keys as the config file.
class ConfigFlags {
 public:
  void attach(CLI::App* app) {
    app->add_option("--config", config_file_, "JSON config file; its keys override flags");
    add<std::string>(app, "--source", "/source", "oracle, prompt or video");
    add<std::string>(app, "--prompt", "/prompt", "scene description for the prompt source");
    add<std::string>(app, "--video", "/video_dir", "directory of PNG frames for the video source");
    add<std::string>(app, "--trajectory", "/trajectory/kind", "orbit-arc, lateral-line or custom-list");
    add<int>(app, "--views", "/trajectory/num_views", "number of cameras");
    add<double>(app, "--radius", "/trajectory/radius", "orbit radius");
    add<double>(app, "--angle", "/trajectory/total_angle", "orbit arc, degrees end to end");
    add<double>(app, "--baseline", "/trajectory/baseline", "lateral line length");
    add<std::vector<double>>(app, "--look-at", "/trajectory/look_at", "orbit center x y z")->expected(3);
    add<double>(app, "--base-fraction", "/base_fraction", "position of the base camera along the rig");
    add<double>(app, "--fov", "/fov_deg", "horizontal field of view, degrees");
    add<int>(app, "--timestamps", "/timestamps", "number of timestamps");
    add<int>(app, "--width", "/width", "working width");
    add<int>(app, "--height", "/height", "working height");
    add<int>(app, "--source-width", "/source_width", "generation width (0: working width)");
    add<int>(app, "--source-height", "/source_height", "generation height (0: working height)");
    add<int>(app, "--generate-steps", "/generate_steps", "video generation steps");
    add<double>(app, "--guidance", "/guidance", "video generation guidance scale");
    add<std::size_t>(app, "--hole-threshold", "/hole_threshold", "large-hole area at 160x96");
    add<std::vector<int>>(app, "--bilateral-sizes", "/bilateral_sizes", "bilateral window sizes");
    add<double>(app, "--sigma-space", "/bilateral_sigma_space", "bilateral spatial sigma");
    add<double>(app, "--sigma-range", "/bilateral_sigma_range", "bilateral range sigma, fraction of depth span");
    add<double>(app, "--rho", "/cim_rho", "background fraction needed to copy from t-1");
    add<double>(app, "--alpha", "/segment_alpha", "depth fraction for the stub segmenter");
    add<int>(app, "--candidates", "/inpaint_candidates", "inpainting candidates per hole");
    add<int>(app, "--inpaint-steps", "/inpaint_steps", "inpainting steps");
    add<int>(app, "--telea-radius", "/telea_radius", "Telea neighbourhood radius");
    add<std::string>(app, "--score-crop", "/score_crop", "full-frame or hole-bbox");
    add<std::string>(app, "--schedule", "/schedule", "farthest or neighbor-first");
    add<double>(app, "--timeout", "/adapters/timeout_s", "adapter request timeout, seconds");
    add<int>(app, "--retries", "/adapters/retries", "adapter retries");
    add<int>(app, "--in-flight", "/adapters/in_flight_limit", "concurrent requests per capability");
    add<double>(app, "--backoff", "/adapters/backoff_base_s", "first retry delay, seconds");
    add<std::vector<double>>(app, "--stub-relative-affine", "/stub_relative_affine",
                             "stub relative depth as gamma beta")
        ->expected(2);
    add<std::string>(app, "-o,--out", "/output_dir", "output directory");
    add<std::int64_t>(app, "--seed", "/seed", "global seed");
    add<int>(app, "--threads", "/threads", "worker threads");

    auto url = std::make_shared<std::string>();
    auto* url_opt = app->add_option("--adapter-url", *url, "serve every capability from this URL");
    auto per_cap = std::make_shared<std::vector<std::string>>();
    auto* cap_opt = app->add_option("--adapter", *per_cap, "capability=URL or capability=stub (repeatable)");
    writers_.push_back([=](nlohmann::json& j) {
      if (url_opt->count())
        for (auto cap : adapters::kAllCapabilities)
          j["adapters"]["endpoints"][std::string(adapters::capability_name(cap))] = *url;
      if (!cap_opt->count()) return;
      for (const auto& item : *per_cap) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidConfig("--adapter expects capability=URL, got " + item);
        j["adapters"]["endpoints"][item.substr(0, eq)] = item.substr(eq + 1);
      }
    });
  }

  nlohmann::json overlay() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& w : writers_) w(j);
    return j;
  }

  nlohmann::json file() const {
    if (config_file_.empty()) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(read_text(config_file_));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidConfig("config file " + config_file_ + ": " + e.what());
    } catch (const MissingCell&) {
      throw InvalidConfig("cannot read config file " + config_file_);
    }
  }

  const std::string& config_file() const { return config_file_; }

 private:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& pointer, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::string>)
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    writers_.push_back([=](nlohmann::json& j) {
      if (opt->count()) j[nlohmann::json::json_pointer(pointer)] = *value;
    });
    return opt;
  }

  std::string config_file_;
  std::vector<std::function<void(nlohmann::json&)>> writers_;
};

struct Resolved {
  PipelineConfig config;
  nlohmann::json info;  // where each setting came from
};

// defaults (or `base`) < flags < config file.
Resolved resolve(const ConfigFlags& flags, const PipelineConfig& base = {}) {
  Resolved r{base, nlohmann::json::object()};
  const nlohmann::json overlay = flags.overlay();
  const nlohmann::json file = flags.file();
  merge_json(r.config, overlay);
  merge_json(r.config, file);
  adapters::apply_env_override(r.config.adapters);
  r.config.validate();

  const nlohmann::json resolved = to_json(r.config);
  nlohmann::json sources = nlohmann::json::object();
  for (const auto& item : resolved.items()) {
    const std::string& key = item.key();
    sources[key] = file.contains(key) ? "config-file" : overlay.contains(key) ? "flag" : "default";
  }
  r.info["config_sources"] = sources;
  r.info["config_precedence"] = "config-file > flags > defaults";
  if (!flags.config_file().empty()) r.info["config_file"] = flags.config_file();
  if (const char* url = std::getenv(adapters::kAdapterUrlEnv); url && *url)
    r.info["adapter_url_override"] = url;
  return r;
}

adapters::ModelClient make_client(const PipelineConfig& cfg) {
  return adapters::ModelClient(cfg.adapters, stub_options(cfg));
}

void clear_outputs(const fs::path& root) {
  for (const char* name : {"frames", "depth", "provenance"}) fs::remove_all(root / name);
  for (const char* name : {"manifest.json", "cameras.json", "report.json"}) fs::remove(root / name);
}

ViewTimeMatrix load_work_dir(const fs::path& root) {
  if (!fs::exists(root / "manifest.json"))
    throw InvalidConfig("no scene4d state in " + root.string() + "; run init first");
  return import_dataset(root, true);
}

// Settings that change results. A resumed build must agree on all of them.
void require_same_results(const PipelineConfig& stored, const PipelineConfig& now) {
  nlohmann::json a = to_json(stored), b = to_json(now);
  for (const char* k : {"threads", "output_dir", "adapters"}) {
    a.erase(k);
    b.erase(k);
  }
  for (const auto& item : a.items())
    if (b.at(item.key()) != item.value())
      throw InvalidConfig("setting '" + item.key() + "' differs from the one " + stored.output_dir +
                          " was initialised with; rerun init");
}

int cmd_init(const ConfigFlags& flags) {
  const Resolved r = resolve(flags);
  const fs::path root = r.config.output_dir;
  auto client = make_client(r.config);
  log_line("ingesting " + to_json(r.config).at("source").get<std::string>() + " source, " +
           std::to_string(r.config.timestamps) + " frames at " + std::to_string(r.config.width) + "x" +
           std::to_string(r.config.height));
  const SourceVideo src = ingest(r.config, client);
  const ViewTimeMatrix m = seed_matrix(r.config, src, r.info);
  clear_outputs(root);
  for (int t = 0; t < m.timestamps(); ++t) write_cell(root, m, m.network().base_index, t);
  write_state(root, m);
  log_line("initialised " + root.string() + " with " + std::to_string(m.views()) + " views");
  return kExitOk;
}

int cmd_build(const ConfigFlags& flags, const std::string& out) {
  const fs::path root = out;
  const ViewTimeMatrix state = load_work_dir(root);
  const PipelineConfig stored = config_from_json(state.info.at("config"));
  Resolved r = resolve(flags, stored);
  r.config.output_dir = root.string();
  require_same_results(stored, r.config);
  if (state.info.contains("config_sources")) {
    nlohmann::json sources = state.info.at("config_sources");
    for (const auto& item : r.info.at("config_sources").items())
      if (item.value() != "default") sources[item.key()] = item.value();
    r.info["config_sources"] = sources;
  }
  for (const char* k : {"config_file", "adapter_url_override"})
    if (state.info.contains(k) && !r.info.contains(k)) r.info[k] = state.info.at(k);

  auto client = make_client(r.config);
  RunOptions opts;
  opts.resume = &state;
  opts.info = r.info;
  opts.log = log_line;
  opts.on_cell = [&](const ViewTimeMatrix& m, int v, int t) {
    if (state.has(v, t)) return;
    write_cell(root, m, v, t);
    write_state(root, m);
  };
  log_line("building " + std::to_string(state.completed()) + " of " +
           std::to_string(state.views() * state.timestamps()) + " cells already present");
  const ViewTimeMatrix m = build(r.config, source_from_matrix(state), client, opts);
  write_state(root, m);
  std::size_t fallbacks = 0;
  for (int t = 0; t < m.timestamps(); ++t)
    for (int v = 0; v < m.views(); ++v) fallbacks += m.meta(v, t).external_fallbacks;
  log_line("matrix complete: " + std::to_string(m.views()) + " views x " + std::to_string(m.timestamps()) +
           " timestamps" + (fallbacks ? ", " + std::to_string(fallbacks) + " inpaint fallbacks" : ""));
  return kExitOk;
}

int cmd_export(const std::string& out, const std::string& to) {
  const ViewTimeMatrix m = import_dataset(out);
  export_dataset(m, to);
  log_line("exported " + std::to_string(m.views() * m.timestamps()) + " cells to " + to);
  return kExitOk;
}

int cmd_verify(const std::string& out, const std::string& report_path) {
  const ViewTimeMatrix m = import_dataset(out);
  const PipelineConfig cfg = config_from_json(m.info.at("config"));
  if (cfg.source == SourceKind::Video)
    throw InvalidConfig("verify needs an oracle-backed matrix (oracle source or stub generation)");
  if (cfg.source == SourceKind::Prompt && !cfg.adapters.endpoint(adapters::Capability::Generate).stub)
    throw InvalidConfig("verify needs an oracle-backed matrix (oracle source or stub generation)");
  const VerifyReport report = verify(m, oracle::two_layer_scene(static_cast<std::uint64_t>(cfg.seed)), cfg.threads);
  const fs::path path = report_path.empty() ? fs::path(out) / "report.json" : fs::path(report_path);
  write_text(path, to_json(report).dump(2));
  const auto& s = report.summary;
  const auto show = [](const std::optional<double>& v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v.value_or(0.0));
    return v ? std::string(buf) : std::string("inf");
  };
  std::cout << "cells " << report.cells.size() << ", exact " << s.infinite_cells << ", PSNR min "
            << show(s.min_psnr) << " mean " << show(s.mean_psnr) << " dB, hole IoU min " << show(s.min_iou)
            << " mean " << show(s.mean_iou) << "\nreport: " << path.string() << "\n";
  return kExitOk;
}

int cmd_oracle(const std::string& out, int frames, int width, int height, double fov, std::uint64_t seed) {
  const auto k = make_intrinsics(fov, width, height);
  const auto seq = oracle::render_sequence(oracle::two_layer_scene(seed), Pose(), k, frames);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.png", i);
    write_bytes(fs::path(out) / name, codec::encode_png(seq[i].frame.color));
  }
  log_line("wrote " + std::to_string(seq.size()) + " oracle frames to " + out);
  return kExitOk;
}

int cmd_serve_stub(const std::string& host, int port) {
  adapters::StubBackend backend;
  httplib::Server server;
  adapters::wire::mount(server, backend);
  log_line("serving stub adapters on http://" + host + ":" + std::to_string(port) + "/v1");
  if (!server.listen(host, port)) throw AdapterUnavailable("cannot listen on " + host + ":" + std::to_string(port));
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidConfig*>(&e)) return kExitConfig;
  if (dynamic_cast<const AdapterUnavailable*>(&e)) return kExitAdapter;
  if (dynamic_cast<const IncompleteMatrix*>(&e)) return kExitIncomplete;
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scene4d: training-free 4D scene construction from a single video"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", quiet, "no progress output");

  ConfigFlags init_flags, build_flags, all_flags;
  auto* init = app.add_subcommand("init", "ingest the source video and estimate its depth");
  init_flags.attach(init);

  std::string build_out = "scene4d_out";
  auto* build_cmd = app.add_subcommand("build", "fill every view and timestamp (resumes partial state)");
  build_flags.attach(build_cmd);

  std::string out_dir = "scene4d_out", export_to, report_path;
  auto* export_cmd = app.add_subcommand("export", "copy a complete matrix to a dataset directory");
  export_cmd->add_option("-o,--out", out_dir, "working directory");
  export_cmd->add_option("--to", export_to, "dataset directory")->required();

  auto* verify_cmd = app.add_subcommand("verify", "compare a matrix against the oracle scene");
  verify_cmd->add_option("-o,--out", out_dir, "working directory");
  verify_cmd->add_option("--report", report_path, "report path (default: <out>/report.json)");

  auto* all = app.add_subcommand("all", "init, build and, for oracle-backed runs, verify");
  all_flags.attach(all);

  std::string oracle_out;
  int oracle_frames = 49, oracle_w = 720, oracle_h = 480;
  double oracle_fov = 60.0;
  std::uint64_t oracle_seed = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "render the oracle scene as a PNG frame sequence");
  oracle_cmd->add_option("-o,--out", oracle_out, "output directory")->required();
  oracle_cmd->add_option("--frames", oracle_frames, "frame count");
  oracle_cmd->add_option("--width", oracle_w, "width");
  oracle_cmd->add_option("--height", oracle_h, "height");
  oracle_cmd->add_option("--fov", oracle_fov, "horizontal field of view, degrees");
  oracle_cmd->add_option("--seed", oracle_seed, "scene seed");

  std::string host = "127.0.0.1";
  int port = 8765;
  auto* serve = app.add_subcommand("serve-stub", "serve the stub adapters over the HTTP protocol");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*init) return cmd_init(init_flags);
    if (*build_cmd) {
      const auto overlay = build_flags.overlay();
      if (overlay.contains("output_dir")) build_out = overlay.at("output_dir").get<std::string>();
      return cmd_build(build_flags, build_out);
    }
    if (*export_cmd) return cmd_export(out_dir, export_to);
    if (*verify_cmd) return cmd_verify(out_dir, report_path);
    if (*all) {
      cmd_init(all_flags);
      const auto out = resolve(all_flags).config;
      // The config is already stored; build reuses it as is.
      cmd_build(ConfigFlags{}, out.output_dir);
      if (out.source == SourceKind::Oracle ||
          (out.source == SourceKind::Prompt && out.adapters.endpoint(adapters::Capability::Generate).stub))
        return cmd_verify(out.output_dir, "");
      return kExitOk;
    }
    if (*oracle_cmd) return cmd_oracle(oracle_out, oracle_frames, oracle_w, oracle_h, oracle_fov, oracle_seed);
    if (*serve) return cmd_serve_stub(host, port);
  } catch (const std::exception& e) {
    std::cerr << "scene4d: error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitFailure;
}
