// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "airkf/frame.hpp"
#include "airkf/fusion.hpp"
#include "airkf/kalman.hpp"
#include "airkf/rir.hpp"
#include "airkf/types.hpp"

namespace airkf {

enum class ExcitationKind { wgn, speech_independent, teleconference };

// Far-end side of the teleconference scenario: two talkers with disjoint
// activity recorded by one far-end microphone per playback channel.
struct TeleconfSetup {
  RoomSpec room;             // fs and rir length filled in at synthesis time
  Mat talker_positions;      // 3 x 2
  Mat mic_positions;         // 3 x B
  int rir_taps = 0;          // 0 = use the frame filter length
  double crossfade_s = 0.05;

  static TeleconfSetup defaults();
};

struct VariantSpec {
  std::string name;         // "baseline_kf" or "kfasp"
  std::string label;        // output label; defaults derived from settings
  KfHyperParams kf;
  FusionConfig fusion;      // used by kfasp variants only

  bool is_baseline() const { return name == "baseline_kf"; }
  std::string resolved_label() const;
};

struct ExperimentConfig {
  FrameConfig frame;
  RoomSpec room;
  SceneGeometry geometry;
  std::string corpus_path;
  int corpus_k = 0;
  ExcitationKind excitation = ExcitationKind::wgn;
  std::vector<std::string> wav_paths;
  double snr_wgn_db = std::numeric_limits<double>::infinity();
  double snr_sp_db = std::numeric_limits<double>::infinity();
  int trials = 1;
  double duration_s = 10.0;
  double switch_time_s = 5.0;
  std::vector<VariantSpec> variants;
  std::uint64_t seed = 1;
  double erle_lambda = 0.99;
  bool aggregate_linear = false;
  TeleconfSetup teleconf = TeleconfSetup::defaults();

  int num_blocks() const;
  void validate() const;
};

struct Scenario {
  Mat excitation;       // N x B loudspeaker streams
  Vec clean_d;          // N, direct-convolution oracle path
  Vec noise;            // N, wgn + speech components mixed at the target SNRs
  AirSample ground_truth;
};

// Plain time-domain convolution truncated to out_len samples; the oracle
// path kept independent of the overlap-save pipeline.
Vec direct_convolve(const Eigen::Ref<const Vec>& signal,
                    const Eigen::Ref<const Vec>& filter, int out_len);

// Deterministic per (config, trial_index). Verifies the direct-convolution
// path against the overlap-save pipeline on the leading blocks.
Scenario synthesize_scenario(const ExperimentConfig& config, int trial_index);

}  // namespace airkf
