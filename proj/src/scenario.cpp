// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "airkf/dft.hpp"
#include "airkf/speechgen.hpp"
#include "airkf/wav.hpp"

namespace airkf {

namespace {

Vec load_excitation_wav(const std::string& path, int fs, int num_samples,
                        Rng& rng) {
  WavData wav = read_wav_mono(path);
  Vec samples = wav.fs == fs ? wav.samples : resample_sinc(wav.samples, wav.fs, fs);
  if (samples.size() < 1) throw std::runtime_error("wav: empty file " + path);
  Vec out(num_samples);
  // Random circular offset, then tile to the requested duration.
  Eigen::Index pos = static_cast<Eigen::Index>(
      rng.below(static_cast<std::uint64_t>(samples.size())));
  for (int t = 0; t < num_samples; ++t) {
    out[t] = samples[pos];
    pos = (pos + 1) % samples.size();
  }
  const double rms = std::sqrt(out.squaredNorm() / num_samples);
  if (rms > 0.0) out /= rms;
  return out;
}

Vec scaled_noise(Vec raw, double snr_db, double clean_energy) {
  if (std::isinf(snr_db)) return Vec::Zero(raw.size());
  const double raw_energy = raw.squaredNorm();
  if (!(clean_energy > 0.0))
    throw std::runtime_error("scenario: SNR unrealizable, clean signal is silent");
  if (!(raw_energy > 0.0))
    throw std::runtime_error("scenario: noise source is silent");
  const double scale =
      std::sqrt(clean_energy / raw_energy * std::pow(10.0, -snr_db / 10.0));
  return raw * scale;
}

// Cross-check the scenario's direct-convolution observation path against the
// overlap-save pipeline on the leading blocks, both using the L-tap
// truncated truth.
void verify_convolution_paths(const ExperimentConfig& config,
                              const Scenario& scenario) {
  const FrameConfig& frame = config.frame;
  const int check_blocks = std::min(config.num_blocks(), 8);
  const int n = check_blocks * frame.R;

  Vec direct = Vec::Zero(n);
  CMat atf(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b) {
    const Vec truncated = scenario.ground_truth.channels.col(b).head(frame.L);
    direct += direct_convolve(scenario.excitation.col(b).head(n), truncated, n);
    atf.col(b) = embed_filter(truncated, frame.M);
  }

  SignalHistory history(frame);
  double max_err = 0.0;
  for (int blk = 0; blk < check_blocks; ++blk) {
    history.push_block(
        scenario.excitation.middleRows(static_cast<Eigen::Index>(blk) * frame.R,
                                       frame.R));
    Vec os = Vec::Zero(frame.R);
    for (int b = 0; b < frame.B; ++b)
      os += os_convolve(dft(history.window().col(b)), atf.col(b), frame.R);
    max_err = std::max(
        (os - direct.segment(static_cast<Eigen::Index>(blk) * frame.R, frame.R))
            .cwiseAbs()
            .maxCoeff(),
        max_err);
  }
  const double scale = std::max(1.0, direct.cwiseAbs().maxCoeff());
  if (max_err > 1e-10 * scale)
    throw std::runtime_error("scenario: convolution-path cross-check failed");
}

}  // namespace

TeleconfSetup TeleconfSetup::defaults() {
  TeleconfSetup setup;
  setup.room.dimensions = Vec3(5.0, 4.0, 3.0);
  setup.room.t60 = 0.2;
  setup.talker_positions.resize(3, 2);
  setup.talker_positions.col(0) = Vec3(1.2, 1.0, 1.5);
  setup.talker_positions.col(1) = Vec3(3.8, 2.9, 1.6);
  setup.mic_positions.resize(3, 2);
  setup.mic_positions.col(0) = Vec3(2.45, 2.0, 1.3);
  setup.mic_positions.col(1) = Vec3(2.55, 2.0, 1.3);
  return setup;
}

std::string VariantSpec::resolved_label() const {
  if (!label.empty()) return label;
  if (is_baseline()) return "baseline_kf";
  std::string metric = fusion.metric == NnMetric::kf ? "dkf" : "deuc";
  std::string mode =
      fusion.mode == FusionMode::soft_combination ? "comb" : "proj";
  return "kfasp_" + metric + "_" + mode;
}

int ExperimentConfig::num_blocks() const {
  const int total = static_cast<int>(std::floor(duration_s * frame.fs));
  return std::max(1, total / frame.R);
}

void ExperimentConfig::validate() const {
  room.validate();
  geometry.validate(room);
  if (frame.B != geometry.channels())
    throw std::invalid_argument("config: frame.B must match loudspeaker count");
  if (frame.fs != room.fs)
    throw std::invalid_argument("config: frame.fs must match room.fs");
  if (room.w_len < frame.L)
    throw std::invalid_argument("config: room.w_len must be >= frame.L");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("config: duration must be positive");
  if (variants.empty())
    throw std::invalid_argument("config: at least one variant required");
  for (const auto& variant : variants) {
    if (variant.name != "baseline_kf" && variant.name != "kfasp")
      throw std::invalid_argument("config: unknown variant " + variant.name);
    variant.kf.validate();
    if (!variant.is_baseline()) variant.fusion.validate();
  }
  if (excitation == ExcitationKind::teleconference) {
    if (geometry.channels() != 2 || teleconf.talker_positions.cols() != 2 ||
        teleconf.mic_positions.cols() != 2)
      throw std::invalid_argument(
          "config: teleconference requires 2 loudspeakers, 2 talkers, 2 far mics");
    if (!(switch_time_s > 0.0 && switch_time_s < duration_s))
      throw std::invalid_argument("config: switch time must fall inside the signal");
  }
}

Vec direct_convolve(const Eigen::Ref<const Vec>& signal,
                    const Eigen::Ref<const Vec>& filter, int out_len) {
  Vec out = Vec::Zero(out_len);
  const Eigen::Index taps = filter.size();
  for (Eigen::Index k = 0; k < taps; ++k) {
    const double h = filter[k];
    if (h == 0.0) continue;
    const Eigen::Index last = std::min<Eigen::Index>(out_len, signal.size() + k);
    for (Eigen::Index t = k; t < last; ++t) out[t] += h * signal[t - k];
  }
  return out;
}

Scenario synthesize_scenario(const ExperimentConfig& config, int trial_index) {
  config.validate();
  const FrameConfig& frame = config.frame;
  const int n = config.num_blocks() * frame.R;

  Scenario scenario;

  // Ground truth AIRs for this trial's mic position.
  {
    Rng rng(derive_seed(config.seed, SeedStream::test_airs, trial_index));
    scenario.ground_truth.mic_position =
        sample_mic_position(config.geometry, config.room, rng);
    scenario.ground_truth.channels.resize(config.room.w_len, frame.B);
    for (int b = 0; b < frame.B; ++b)
      scenario.ground_truth.channels.col(b) =
          simulate_rir(config.room, config.geometry.loudspeaker_positions.col(b),
                       scenario.ground_truth.mic_position);
  }

  // Loudspeaker streams.
  scenario.excitation.resize(n, frame.B);
  switch (config.excitation) {
    case ExcitationKind::wgn: {
      for (int b = 0; b < frame.B; ++b) {
        Rng rng(derive_seed(config.seed, SeedStream::excitation,
                            static_cast<std::uint64_t>(trial_index) * 64 + b));
        for (int t = 0; t < n; ++t) scenario.excitation(t, b) = rng.normal();
      }
      break;
    }
    case ExcitationKind::speech_independent: {
      for (int b = 0; b < frame.B; ++b) {
        Rng rng(derive_seed(config.seed, SeedStream::excitation,
                            static_cast<std::uint64_t>(trial_index) * 64 + b));
        if (config.wav_paths.empty()) {
          scenario.excitation.col(b) = speech_like(n, frame.fs, rng);
        } else {
          const auto& path = config.wav_paths[rng.below(config.wav_paths.size())];
          scenario.excitation.col(b) =
              load_excitation_wav(path, frame.fs, n, rng);
        }
      }
      break;
    }
    case ExcitationKind::teleconference: {
      // Two far-end talkers with disjoint activity; the active one switches
      // at switch_time_s with a short crossfade. Each playback channel is a
      // far-end microphone signal, so the two channels stay strongly
      // correlated and the near-end identification problem is nonunique.
      RoomSpec far_room = config.teleconf.room;
      far_room.fs = frame.fs;
      far_room.w_len =
          config.teleconf.rir_taps > 0 ? config.teleconf.rir_taps : frame.L;

      Mat sources(n, 2);
      for (int s = 0; s < 2; ++s) {
        Rng rng(derive_seed(config.seed, SeedStream::excitation,
                            static_cast<std::uint64_t>(trial_index) * 64 + s));
        if (config.wav_paths.empty()) {
          sources.col(s) = speech_like(n, frame.fs, rng);
        } else {
          const auto& path = config.wav_paths[rng.below(config.wav_paths.size())];
          sources.col(s) = load_excitation_wav(path, frame.fs, n, rng);
        }
      }
      const int switch_at = static_cast<int>(config.switch_time_s * frame.fs);
      const int fade = std::max(1, static_cast<int>(config.teleconf.crossfade_s *
                                                    frame.fs));
      for (int t = 0; t < n; ++t) {
        double g = 0.0;  // activity of talker 2
        if (t >= switch_at + fade) g = 1.0;
        else if (t >= switch_at)
          g = 0.5 * (1.0 - std::cos(3.14159265358979323846 * (t - switch_at) /
                                    fade));
        sources(t, 0) *= 1.0 - g;
        sources(t, 1) *= g;
      }

      scenario.excitation.setZero();
      for (int b = 0; b < 2; ++b) {
        const Vec3 mic = config.teleconf.mic_positions.col(b);
        for (int s = 0; s < 2; ++s) {
          const Vec rir = simulate_rir(
              far_room, config.teleconf.talker_positions.col(s), mic);
          scenario.excitation.col(b) +=
              direct_convolve(sources.col(s), rir, n);
        }
      }
      break;
    }
  }

  // Clean observation via the direct-convolution oracle path.
  scenario.clean_d = Vec::Zero(n);
  for (int b = 0; b < frame.B; ++b)
    scenario.clean_d += direct_convolve(scenario.excitation.col(b),
                                        scenario.ground_truth.channels.col(b), n);

  // Noise components at the prescribed SNRs, measured over the full signal.
  const double clean_energy = scenario.clean_d.squaredNorm();
  Vec n_wgn = Vec::Zero(n);
  if (!std::isinf(config.snr_wgn_db)) {
    Rng rng(derive_seed(config.seed, SeedStream::noise_wgn, trial_index));
    for (int t = 0; t < n; ++t) n_wgn[t] = rng.normal();
    n_wgn = scaled_noise(std::move(n_wgn), config.snr_wgn_db, clean_energy);
  }
  Vec n_sp = Vec::Zero(n);
  if (!std::isinf(config.snr_sp_db)) {
    Rng rng(derive_seed(config.seed, SeedStream::noise_speech, trial_index));
    n_sp = scaled_noise(speech_like(n, frame.fs, rng), config.snr_sp_db,
                        clean_energy);
  }
  scenario.noise = n_wgn + n_sp;

  verify_convolution_paths(config, scenario);
  return scenario;
}

}  // namespace airkf
