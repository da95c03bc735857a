// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "airkf/rng.hpp"
#include "airkf/training_set.hpp"
#include "airkf/types.hpp"

namespace airkf {

struct RoomSpec {
  Vec3 dimensions = Vec3::Zero();  // metres
  double t60 = 0.0;                // seconds
  int fs = 0;                      // Hz
  int w_len = 0;                   // impulse response length W in taps

  void validate() const;
};

// Mic positions are drawn from a volumetric sphere segment around the
// loudspeaker array: radius, azimuth and elevation ranges relative to
// array_center. Angles in degrees.
struct SceneGeometry {
  Mat loudspeaker_positions;  // 3 x B
  Vec3 array_center = Vec3::Zero();
  Eigen::Vector2d radius_range = {0.0, 0.0};
  Eigen::Vector2d azimuth_range_deg = {0.0, 0.0};
  Eigen::Vector2d elevation_range_deg = {0.0, 0.0};

  int channels() const { return static_cast<int>(loudspeaker_positions.cols()); }
  void validate(const RoomSpec& room) const;
};

// Ground truth for one mic position: B impulse responses of full length W.
struct AirSample {
  Mat channels;  // W x B
  Vec3 mic_position = Vec3::Zero();
};

struct ImageMethodOptions {
  // < 0 selects the automatic order ceil(c*W/fs / min(dimension)) + 1.
  int max_order = -1;
  // >= 0 overrides the Eyring wall reflection coefficient (0 = anechoic).
  double reflection_override = -1.0;
};

// Uniform wall reflection coefficient realizing t60 via Eyring's formula.
double eyring_reflection(const RoomSpec& room);

// Allen-Berkley image-source simulation with fractional delays realized by a
// Hann-windowed sinc interpolator of 81 taps centered at the arrival time.
Vec simulate_rir(const RoomSpec& room, const Vec3& source, const Vec3& mic,
                 const ImageMethodOptions& options = {});

// Uniform-in-volume draw over the sphere segment, rejected against the room
// boundary.
Vec3 sample_mic_position(const SceneGeometry& geometry, const RoomSpec& room,
                         Rng& rng);

std::uint64_t geometry_hash(const RoomSpec& room, const SceneGeometry& geometry);

// Full-length ground-truth AIRs for `count` independently drawn positions.
// Deterministic per (inputs, seed) regardless of thread count.
std::vector<AirSample> generate_air_samples(const RoomSpec& room,
                                            const SceneGeometry& geometry,
                                            int count, std::uint64_t seed,
                                            int threads = 1);

// Training corpus: each sample's channels truncated to the first L taps and
// stacked into a Q = L*B vector.
TrainingSet generate_corpus(const RoomSpec& room, const SceneGeometry& geometry,
                            int taps, int count, std::uint64_t seed,
                            int threads = 1);

}  // namespace airkf
