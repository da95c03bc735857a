// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/speechgen.hpp"

#include <cmath>
#include <stdexcept>

namespace airkf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// AR(8) coefficients from four resonances; a[0] = 1, x[t] = e[t] - sum a[k] x[t-k].
Vec vocal_tract_ar(int fs, Rng& rng) {
  const double base_freqs[4] = {450.0, 1150.0, 2350.0, 3300.0};
  const double radii[4] = {0.97, 0.95, 0.93, 0.90};
  Vec a = Vec::Zero(9);
  a[0] = 1.0;
  for (int p = 0; p < 4; ++p) {
    double f = base_freqs[p] * (1.0 + 0.08 * (2.0 * rng.uniform() - 1.0));
    f = std::min(f, 0.45 * fs);  // keep poles below Nyquist
    const double omega = 2.0 * kPi * f / fs;
    const double c1 = -2.0 * radii[p] * std::cos(omega);
    const double c2 = radii[p] * radii[p];
    // multiply a(z) by (1 + c1 z^-1 + c2 z^-2)
    Vec next = a;
    for (int i = 8; i >= 1; --i) {
      double v = a[i];
      if (i >= 1) v += c1 * a[i - 1];
      if (i >= 2) v += c2 * a[i - 2];
      next[i] = v;
    }
    a = next;
  }
  return a;
}

}  // namespace

Vec activity_gate(int num_samples, int fs, Rng& rng) {
  Vec gate = Vec::Zero(num_samples);
  const int ramp = std::max(1, fs / 50);  // 20 ms
  int t = 0;
  bool talking = rng.uniform() < 0.75;
  while (t < num_samples) {
    const double duration_s =
        talking ? 0.3 + 1.2 * rng.uniform() : 0.15 + 0.35 * rng.uniform();
    const int duration = std::max(ramp, static_cast<int>(duration_s * fs));
    if (talking) {
      for (int i = 0; i < duration && t + i < num_samples; ++i) {
        double g = 1.0;
        if (i < ramp) g = 0.5 * (1.0 - std::cos(kPi * i / ramp));
        else if (duration - 1 - i < ramp)
          g = 0.5 * (1.0 - std::cos(kPi * (duration - 1 - i) / ramp));
        gate[t + i] = g;
      }
    }
    t += duration;
    talking = !talking;
  }
  return gate;
}

Vec speech_like(int num_samples, int fs, Rng& rng) {
  if (num_samples < 1)
    throw std::invalid_argument("speech_like: num_samples must be >= 1");
  const Vec a = vocal_tract_ar(fs, rng);
  const Vec gate = activity_gate(num_samples, fs, rng);

  // Syllabic amplitude modulation: a slow random envelope from one-pole
  // smoothed noise, kept strictly positive during talk spurts.
  const double pole = std::exp(-2.0 * kPi * 3.0 / fs);  // ~3 Hz
  double env_state = 0.0;
  Vec x = Vec::Zero(num_samples);
  for (int t = 0; t < num_samples; ++t) {
    env_state = pole * env_state + (1.0 - pole) * rng.normal();
    const double envelope = 0.25 + 1.5 * std::abs(env_state) * 8.0;
    const double e = rng.normal() * envelope * gate[t];
    double v = e;
    for (int k = 1; k <= 8 && t - k >= 0; ++k) v -= a[k] * x[t - k];
    x[t] = v;
  }
  const double rms = std::sqrt(x.squaredNorm() / num_samples);
  if (rms > 0.0) x /= rms;
  return x;
}

}  // namespace airkf
