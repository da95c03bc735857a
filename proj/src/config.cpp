// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace airkf {

namespace {

using nlohmann::json;

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, value] : object.items())
    if (!allowed.contains(key))
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " +
                                  context);
}

double parse_snr(const json& value, const std::string& context) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("config: " + context + " must be a number or \"inf\"");
  }
  return value.get<double>();
}

Vec3 parse_vec3(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 3)
    throw std::invalid_argument("config: " + context + " must have 3 entries");
  return Vec3(value[0].get<double>(), value[1].get<double>(),
              value[2].get<double>());
}

Eigen::Vector2d parse_vec2(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 2)
    throw std::invalid_argument("config: " + context + " must have 2 entries");
  return Eigen::Vector2d(value[0].get<double>(), value[1].get<double>());
}

Mat parse_points(const json& value, const std::string& context) {
  if (!value.is_array() || value.empty())
    throw std::invalid_argument("config: " + context + " must be a point list");
  Mat points(3, value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    points.col(i) = parse_vec3(value[i], context);
  return points;
}

RoomSpec parse_room(const json& object, int fs, const std::string& context) {
  check_keys(object, {"dimensions", "t60", "w_len"}, context);
  RoomSpec room;
  room.dimensions = parse_vec3(object.at("dimensions"), context + ".dimensions");
  room.t60 = object.at("t60").get<double>();
  room.w_len = object.at("w_len").get<int>();
  room.fs = fs;
  return room;
}

VariantSpec parse_variant(const json& object) {
  check_keys(object,
             {"name", "label", "metric", "mode", "k_tau", "beta_pr", "p0",
              "search_stride", "a", "lambda_w", "lambda_n"},
             "variants[]");
  VariantSpec variant;
  variant.name = object.at("name").get<std::string>();
  if (object.contains("label")) variant.label = object["label"].get<std::string>();

  if (variant.name == "baseline_kf") {
    variant.kf = KfHyperParams{};  // p0 = 0.01
  } else if (variant.name == "kfasp") {
    variant.kf = KfHyperParams{};
    variant.kf.p0 = variant.fusion.p0;
  } else {
    throw std::invalid_argument("config: unknown variant name " + variant.name);
  }

  if (object.contains("a")) variant.kf.a = object["a"].get<double>();
  if (object.contains("lambda_w"))
    variant.kf.lambda_w = object["lambda_w"].get<double>();
  if (object.contains("lambda_n"))
    variant.kf.lambda_n = object["lambda_n"].get<double>();
  if (object.contains("metric")) {
    const auto metric = object["metric"].get<std::string>();
    if (metric == "euclidean") variant.fusion.metric = NnMetric::euclidean;
    else if (metric == "kf") variant.fusion.metric = NnMetric::kf;
    else throw std::invalid_argument("config: unknown metric " + metric);
  }
  if (object.contains("mode")) {
    const auto mode = object["mode"].get<std::string>();
    if (mode == "hard_projection") variant.fusion.mode = FusionMode::hard_projection;
    else if (mode == "soft_combination")
      variant.fusion.mode = FusionMode::soft_combination;
    else throw std::invalid_argument("config: unknown mode " + mode);
  }
  if (object.contains("k_tau")) variant.fusion.k_tau = object["k_tau"].get<int>();
  if (object.contains("beta_pr")) {
    variant.fusion.beta_pr = parse_snr(object["beta_pr"], "beta_pr");
  }
  if (object.contains("search_stride"))
    variant.fusion.search_stride = object["search_stride"].get<int>();
  if (object.contains("p0")) {
    variant.fusion.p0 = object["p0"].get<double>();
    variant.kf.p0 = variant.fusion.p0;
  } else if (!variant.is_baseline()) {
    variant.kf.p0 = variant.fusion.p0;
  }
  return variant;
}

std::string snr_to_json(double value) {
  if (std::isinf(value)) return "\"inf\"";
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root = json::parse(json_text);
  check_keys(root,
             {"frame", "room", "geometry", "corpus", "excitation", "snr_wgn_db",
              "snr_sp_db", "trials", "duration_s", "switch_time_s", "variants",
              "seed", "erle_lambda", "aggregate_linear", "teleconference"},
             "top level");

  ExperimentConfig config;

  const json& frame = root.at("frame");
  check_keys(frame, {"L", "R", "B", "fs"}, "frame");
  config.frame = FrameConfig(frame.at("L").get<int>(), frame.at("R").get<int>(),
                             frame.at("B").get<int>(), frame.at("fs").get<int>());

  config.room = parse_room(root.at("room"), config.frame.fs, "room");

  const json& geometry = root.at("geometry");
  check_keys(geometry,
             {"loudspeaker_positions", "array_center", "radius_range",
              "azimuth_range_deg", "elevation_range_deg"},
             "geometry");
  config.geometry.loudspeaker_positions =
      parse_points(geometry.at("loudspeaker_positions"), "loudspeaker_positions");
  config.geometry.array_center =
      parse_vec3(geometry.at("array_center"), "array_center");
  config.geometry.radius_range =
      parse_vec2(geometry.at("radius_range"), "radius_range");
  config.geometry.azimuth_range_deg =
      parse_vec2(geometry.at("azimuth_range_deg"), "azimuth_range_deg");
  config.geometry.elevation_range_deg =
      parse_vec2(geometry.at("elevation_range_deg"), "elevation_range_deg");

  const json& corpus = root.at("corpus");
  check_keys(corpus, {"path", "k"}, "corpus");
  config.corpus_path = corpus.at("path").get<std::string>();
  config.corpus_k = corpus.at("k").get<int>();

  const json& excitation = root.at("excitation");
  check_keys(excitation, {"kind", "wav_paths"}, "excitation");
  const auto kind = excitation.at("kind").get<std::string>();
  if (kind == "wgn") config.excitation = ExcitationKind::wgn;
  else if (kind == "speech_independent")
    config.excitation = ExcitationKind::speech_independent;
  else if (kind == "teleconference")
    config.excitation = ExcitationKind::teleconference;
  else throw std::invalid_argument("config: unknown excitation kind " + kind);
  if (excitation.contains("wav_paths"))
    config.wav_paths = excitation["wav_paths"].get<std::vector<std::string>>();

  config.snr_wgn_db = parse_snr(root.at("snr_wgn_db"), "snr_wgn_db");
  config.snr_sp_db = parse_snr(root.at("snr_sp_db"), "snr_sp_db");
  config.trials = root.at("trials").get<int>();
  config.duration_s = root.at("duration_s").get<double>();
  if (root.contains("switch_time_s"))
    config.switch_time_s = root["switch_time_s"].get<double>();
  config.seed = root.at("seed").get<std::uint64_t>();
  if (root.contains("erle_lambda"))
    config.erle_lambda = root["erle_lambda"].get<double>();
  if (root.contains("aggregate_linear"))
    config.aggregate_linear = root["aggregate_linear"].get<bool>();

  for (const json& entry : root.at("variants"))
    config.variants.push_back(parse_variant(entry));

  if (root.contains("teleconference")) {
    const json& tc = root["teleconference"];
    check_keys(tc, {"room", "talker_positions", "mic_positions", "rir_taps",
                    "crossfade_s"},
               "teleconference");
    if (tc.contains("room"))
      config.teleconf.room = parse_room(tc["room"], config.frame.fs,
                                        "teleconference.room");
    if (tc.contains("talker_positions"))
      config.teleconf.talker_positions =
          parse_points(tc["talker_positions"], "talker_positions");
    if (tc.contains("mic_positions"))
      config.teleconf.mic_positions =
          parse_points(tc["mic_positions"], "mic_positions");
    if (tc.contains("rir_taps")) config.teleconf.rir_taps = tc["rir_taps"].get<int>();
    if (tc.contains("crossfade_s"))
      config.teleconf.crossfade_s = tc["crossfade_s"].get<double>();
  }
  // The teleconference room carries no w_len in the config; it is resolved at
  // synthesis time, so give it a placeholder that passes validation.
  if (config.teleconf.room.fs == 0) config.teleconf.room.fs = config.frame.fs;
  if (config.teleconf.room.w_len == 0) config.teleconf.room.w_len = config.frame.L;

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  root["frame"] = {{"L", config.frame.L},
                   {"R", config.frame.R},
                   {"B", config.frame.B},
                   {"fs", config.frame.fs}};
  root["room"] = {{"dimensions",
                   {config.room.dimensions[0], config.room.dimensions[1],
                    config.room.dimensions[2]}},
                  {"t60", config.room.t60},
                  {"w_len", config.room.w_len}};
  json speakers = json::array();
  for (int b = 0; b < config.geometry.channels(); ++b)
    speakers.push_back({config.geometry.loudspeaker_positions(0, b),
                        config.geometry.loudspeaker_positions(1, b),
                        config.geometry.loudspeaker_positions(2, b)});
  root["geometry"] = {
      {"loudspeaker_positions", speakers},
      {"array_center",
       {config.geometry.array_center[0], config.geometry.array_center[1],
        config.geometry.array_center[2]}},
      {"radius_range",
       {config.geometry.radius_range[0], config.geometry.radius_range[1]}},
      {"azimuth_range_deg",
       {config.geometry.azimuth_range_deg[0],
        config.geometry.azimuth_range_deg[1]}},
      {"elevation_range_deg",
       {config.geometry.elevation_range_deg[0],
        config.geometry.elevation_range_deg[1]}}};
  root["corpus"] = {{"path", config.corpus_path}, {"k", config.corpus_k}};
  const char* kind = config.excitation == ExcitationKind::wgn
                         ? "wgn"
                         : (config.excitation == ExcitationKind::speech_independent
                                ? "speech_independent"
                                : "teleconference");
  root["excitation"] = {{"kind", kind}, {"wav_paths", config.wav_paths}};
  root["snr_wgn_db"] =
      std::isinf(config.snr_wgn_db) ? json("inf") : json(config.snr_wgn_db);
  root["snr_sp_db"] =
      std::isinf(config.snr_sp_db) ? json("inf") : json(config.snr_sp_db);
  root["trials"] = config.trials;
  root["duration_s"] = config.duration_s;
  root["switch_time_s"] = config.switch_time_s;
  root["seed"] = config.seed;
  root["erle_lambda"] = config.erle_lambda;
  root["aggregate_linear"] = config.aggregate_linear;
  json variants = json::array();
  for (const auto& variant : config.variants) {
    json entry = {{"name", variant.name},
                  {"label", variant.resolved_label()},
                  {"a", variant.kf.a},
                  {"lambda_w", variant.kf.lambda_w},
                  {"lambda_n", variant.kf.lambda_n},
                  {"p0", variant.kf.p0}};
    if (!variant.is_baseline()) {
      entry["metric"] =
          variant.fusion.metric == NnMetric::kf ? "kf" : "euclidean";
      entry["mode"] = variant.fusion.mode == FusionMode::soft_combination
                          ? "soft_combination"
                          : "hard_projection";
      entry["k_tau"] = variant.fusion.k_tau;
      entry["beta_pr"] = std::isinf(variant.fusion.beta_pr)
                             ? json("inf")
                             : json(variant.fusion.beta_pr);
      entry["search_stride"] = variant.fusion.search_stride;
    }
    variants.push_back(entry);
  }
  root["variants"] = variants;
  json talkers = json::array(), far_mics = json::array();
  for (int i = 0; i < config.teleconf.talker_positions.cols(); ++i)
    talkers.push_back({config.teleconf.talker_positions(0, i),
                       config.teleconf.talker_positions(1, i),
                       config.teleconf.talker_positions(2, i)});
  for (int i = 0; i < config.teleconf.mic_positions.cols(); ++i)
    far_mics.push_back({config.teleconf.mic_positions(0, i),
                        config.teleconf.mic_positions(1, i),
                        config.teleconf.mic_positions(2, i)});
  root["teleconference"] = {
      {"room",
       {{"dimensions",
         {config.teleconf.room.dimensions[0], config.teleconf.room.dimensions[1],
          config.teleconf.room.dimensions[2]}},
        {"t60", config.teleconf.room.t60},
        {"w_len", config.teleconf.room.w_len}}},
      {"talker_positions", talkers},
      {"mic_positions", far_mics},
      {"rir_taps", config.teleconf.rir_taps},
      {"crossfade_s", config.teleconf.crossfade_s}};
  return root.dump(2);
}

}  // namespace airkf
