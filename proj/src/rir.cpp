// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/rir.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "airkf/parallel.hpp"

namespace airkf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSincTaps = 81;
constexpr int kSincHalf = kSincTaps / 2;

bool inside_room(const Vec3& p, const Vec3& dims, double margin = 1e-6) {
  for (int i = 0; i < 3; ++i)
    if (!(p[i] > margin && p[i] < dims[i] - margin)) return false;
  return true;
}

// Adds gain * hann_sinc(idx - delay) for the 81 taps around the arrival.
// The sinc factor needs a single sin() per pulse because
// sin(pi*(n - frac)) = -(-1)^n sin(pi*frac); the Hann factor uses the
// cos(a + n*b) two-term recurrence.
void add_pulse(Vec& rir, double delay_samples, double gain) {
  const int w = static_cast<int>(rir.size());
  const int j0 = static_cast<int>(std::floor(delay_samples));
  if (j0 - kSincHalf >= w) return;
  const double frac = delay_samples - j0;
  const double s = std::sin(kPi * frac);

  const double b = 2.0 * kPi / kSincTaps;
  const double a = b * (-kSincHalf - frac);
  const double two_cos_b = 2.0 * std::cos(b);
  double c_prev = std::cos(a - b);
  double c_cur = std::cos(a);

  double sign = 1.0;  // (-1)^n
  for (int n = 0; n < kSincTaps; ++n) {
    const int idx = j0 - kSincHalf + n;
    const double t = (n - kSincHalf) - frac;
    if (idx >= 0 && idx < w) {
      const double window = 0.5 * (1.0 + c_cur);
      const double sinc = std::abs(t) < 1e-12 ? 1.0 : -sign * s / (kPi * t);
      rir[idx] += gain * window * sinc;
    }
    const double c_next = two_cos_b * c_cur - c_prev;
    c_prev = c_cur;
    c_cur = c_next;
    sign = -sign;
  }
}

}  // namespace

void RoomSpec::validate() const {
  if (!(dimensions.array() > 0.0).all())
    throw std::invalid_argument("RoomSpec: dimensions must be positive");
  if (!(t60 > 0.0)) throw std::invalid_argument("RoomSpec: t60 must be positive");
  if (fs <= 0) throw std::invalid_argument("RoomSpec: fs must be positive");
  if (w_len < 1) throw std::invalid_argument("RoomSpec: w_len must be >= 1");
}

void SceneGeometry::validate(const RoomSpec& room) const {
  if (channels() < 1)
    throw std::invalid_argument("SceneGeometry: need at least one loudspeaker");
  for (int b = 0; b < channels(); ++b)
    if (!inside_room(loudspeaker_positions.col(b), room.dimensions))
      throw std::invalid_argument("SceneGeometry: loudspeaker outside the room");
  if (!inside_room(array_center, room.dimensions))
    throw std::invalid_argument("SceneGeometry: array center outside the room");
  if (!(radius_range[0] >= 0.0) || radius_range[0] > radius_range[1])
    throw std::invalid_argument("SceneGeometry: radius range empty");
  if (azimuth_range_deg[0] > azimuth_range_deg[1])
    throw std::invalid_argument("SceneGeometry: azimuth range empty");
  if (elevation_range_deg[0] > elevation_range_deg[1] ||
      elevation_range_deg[0] < -90.0 || elevation_range_deg[1] > 90.0)
    throw std::invalid_argument("SceneGeometry: elevation range invalid");
}

double eyring_reflection(const RoomSpec& room) {
  const double lx = room.dimensions[0];
  const double ly = room.dimensions[1];
  const double lz = room.dimensions[2];
  const double volume = lx * ly * lz;
  const double surface = 2.0 * (lx * ly + lx * lz + ly * lz);
  const double absorption =
      1.0 - std::exp(-0.161 * volume / (surface * room.t60));
  if (absorption >= 1.0) return 0.0;
  return std::sqrt(1.0 - absorption);
}

Vec simulate_rir(const RoomSpec& room, const Vec3& source, const Vec3& mic,
                 const ImageMethodOptions& options) {
  room.validate();
  if (!inside_room(source, room.dimensions) || !inside_room(mic, room.dimensions))
    throw std::invalid_argument("simulate_rir: positions must be inside the room");
  if ((source - mic).norm() < 1e-9)
    throw std::invalid_argument("simulate_rir: source and mic coincide");

  const double c_ts = kSpeedOfSound / room.fs;  // metres per sample
  const int w = room.w_len;
  const double beta = options.reflection_override >= 0.0
                          ? options.reflection_override
                          : eyring_reflection(room);
  const int order =
      options.max_order >= 0
          ? options.max_order
          : static_cast<int>(std::ceil(static_cast<double>(w) * c_ts /
                                       room.dimensions.minCoeff())) +
                1;

  const Vec3 l = room.dimensions / c_ts;  // room in sample units
  const Vec3 s = source / c_ts;
  const Vec3 r = mic / c_ts;
  const int n1 = static_cast<int>(std::ceil(w / (2.0 * l[0])));
  const int n2 = static_cast<int>(std::ceil(w / (2.0 * l[1])));
  const int n3 = static_cast<int>(std::ceil(w / (2.0 * l[2])));

  // beta^e lookup; exponents are bounded by the lattice extent.
  const int max_exp = 2 * (n1 + n2 + n3) + 3;
  Vec beta_pow(max_exp + 1);
  beta_pow[0] = 1.0;
  for (int e = 1; e <= max_exp; ++e) beta_pow[e] = beta_pow[e - 1] * beta;

  Vec rir = Vec::Zero(w);
  for (int mx = -n1; mx <= n1; ++mx) {
    const double rm_x = 2.0 * mx * l[0];
    for (int q = 0; q <= 1; ++q) {
      const double dx = (1 - 2 * q) * s[0] - r[0] + rm_x;
      const int ex = std::abs(mx - q) + std::abs(mx);
      const int ox = std::abs(2 * mx - q);
      for (int my = -n2; my <= n2; ++my) {
        const double rm_y = 2.0 * my * l[1];
        for (int j = 0; j <= 1; ++j) {
          const double dy = (1 - 2 * j) * s[1] - r[1] + rm_y;
          const int exy = ex + std::abs(my - j) + std::abs(my);
          const int oxy = ox + std::abs(2 * my - j);
          if (oxy > order) continue;
          for (int mz = -n3; mz <= n3; ++mz) {
            const double rm_z = 2.0 * mz * l[2];
            for (int k = 0; k <= 1; ++k) {
              if (oxy + std::abs(2 * mz - k) > order) continue;
              const double dz = (1 - 2 * k) * s[2] - r[2] + rm_z;
              const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
              if (std::floor(dist) - kSincHalf >= w) continue;
              const int e = exy + std::abs(mz - k) + std::abs(mz);
              const double refl = beta_pow[e];
              if (refl == 0.0) continue;
              const double gain = refl / (4.0 * kPi * dist * c_ts);
              add_pulse(rir, dist, gain);
            }
          }
        }
      }
    }
  }
  return rir;
}

Vec3 sample_mic_position(const SceneGeometry& geometry, const RoomSpec& room,
                         Rng& rng) {
  geometry.validate(room);
  const double deg = kPi / 180.0;
  const double r3_lo = std::pow(geometry.radius_range[0], 3);
  const double r3_hi = std::pow(geometry.radius_range[1], 3);
  const double sin_lo = std::sin(geometry.elevation_range_deg[0] * deg);
  const double sin_hi = std::sin(geometry.elevation_range_deg[1] * deg);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double radius = std::cbrt(r3_lo + rng.uniform() * (r3_hi - r3_lo));
    const double azimuth = deg * (geometry.azimuth_range_deg[0] +
                                  rng.uniform() * (geometry.azimuth_range_deg[1] -
                                                   geometry.azimuth_range_deg[0]));
    const double elevation = std::asin(sin_lo + rng.uniform() * (sin_hi - sin_lo));
    const Vec3 offset(radius * std::cos(elevation) * std::cos(azimuth),
                      radius * std::cos(elevation) * std::sin(azimuth),
                      radius * std::sin(elevation));
    const Vec3 pos = geometry.array_center + offset;
    if (inside_room(pos, room.dimensions)) return pos;
  }
  throw std::runtime_error(
      "sample_mic_position: segment does not intersect the room interior");
}

std::uint64_t geometry_hash(const RoomSpec& room, const SceneGeometry& geometry) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_d = [&](double v) { mix(&v, sizeof(v)); };
  for (int i = 0; i < 3; ++i) mix_d(room.dimensions[i]);
  mix_d(room.t60);
  mix_d(static_cast<double>(room.fs));
  mix_d(static_cast<double>(room.w_len));
  for (int b = 0; b < geometry.channels(); ++b)
    for (int i = 0; i < 3; ++i) mix_d(geometry.loudspeaker_positions(i, b));
  for (int i = 0; i < 3; ++i) mix_d(geometry.array_center[i]);
  mix_d(geometry.radius_range[0]);
  mix_d(geometry.radius_range[1]);
  mix_d(geometry.azimuth_range_deg[0]);
  mix_d(geometry.azimuth_range_deg[1]);
  mix_d(geometry.elevation_range_deg[0]);
  mix_d(geometry.elevation_range_deg[1]);
  return h;
}

std::vector<AirSample> generate_air_samples(const RoomSpec& room,
                                            const SceneGeometry& geometry,
                                            int count, std::uint64_t seed,
                                            int threads) {
  if (count < 1) throw std::invalid_argument("generate_air_samples: count >= 1");
  room.validate();
  geometry.validate(room);
  std::vector<AirSample> samples(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, SeedStream::mic_position, i));
    AirSample sample;
    sample.mic_position = sample_mic_position(geometry, room, rng);
    sample.channels.resize(room.w_len, geometry.channels());
    for (int b = 0; b < geometry.channels(); ++b)
      sample.channels.col(b) = simulate_rir(
          room, geometry.loudspeaker_positions.col(b), sample.mic_position);
    samples[i] = std::move(sample);
  });
  return samples;
}

TrainingSet generate_corpus(const RoomSpec& room, const SceneGeometry& geometry,
                            int taps, int count, std::uint64_t seed,
                            int threads) {
  if (taps < 1 || taps > room.w_len)
    throw std::invalid_argument("generate_corpus: need 1 <= L <= W");
  const auto samples = generate_air_samples(room, geometry, count, seed, threads);
  const int channels = geometry.channels();
  Mat vectors(static_cast<Eigen::Index>(taps) * channels, count);
  for (int i = 0; i < count; ++i)
    for (int b = 0; b < channels; ++b)
      vectors.col(i).segment(static_cast<Eigen::Index>(b) * taps, taps) =
          samples[i].channels.col(b).head(taps);
  return TrainingSet(std::move(vectors), channels, taps, room.fs, seed,
                     geometry_hash(room, geometry));
}

}  // namespace airkf
