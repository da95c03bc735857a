// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace airkf {

// Seed streams for independent parts of an experiment. Derived seeds are
// stable across platforms and thread counts, which is what makes reruns
// byte-identical.
enum class SeedStream : std::uint64_t {
  corpus = 0x636f7270,
  test_airs = 0x74657374,
  excitation = 0x65786369,
  noise_wgn = 0x6e77676e,
  noise_speech = 0x6e737065,
  mic_position = 0x6d696370,
  kmeans = 0x6b6d6e73,
  far_end = 0x66617265,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream,
                                 std::uint64_t index) {
  std::uint64_t s = splitmix64(base ^ static_cast<std::uint64_t>(stream));
  return splitmix64(s ^ (index * 0xd1342543de82ef95ull + 1));
}

// mt19937_64 with explicit variate mappings. The standard distributions are
// implementation-defined, so uniform/normal are spelled out here to keep
// outputs reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one variate per pair of uniforms, no rejection.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, n), n >= 1; rejection-free modulo bias is
  // negligible for the corpus sizes used here but we reject anyway.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace airkf
