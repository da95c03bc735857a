// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>

#include "airkf/frame.hpp"
#include "airkf/types.hpp"

namespace airkf {

// A corpus of K time-domain MISO AIR vectors of length Q = L*B, one column
// per sample, channel-major within a column (channel 0 taps, channel 1 taps,
// ...). The frame shift R is not a property of the corpus; consumers bring
// their own FrameConfig and must match B, L and fs.
class TrainingSet {
 public:
  TrainingSet() = default;
  TrainingSet(Mat vectors, int channels, int taps, int rate,
              std::uint64_t seed, std::uint64_t geometry_hash = 0);

  int k() const { return static_cast<int>(vectors_.cols()); }
  int q() const { return static_cast<int>(vectors_.rows()); }
  int channels() const { return channels_; }
  int taps() const { return taps_; }
  int sample_rate() const { return rate_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t geometry_hash() const { return geometry_hash_; }

  const Mat& vectors() const { return vectors_; }
  Vec vector(int index) const { return vectors_.col(index); }

  // One channel of one sample as an L-tap view.
  Eigen::Ref<const Vec> channel(int index, int b) const {
    return vectors_.col(index).segment(static_cast<Eigen::Index>(b) * taps_,
                                       taps_);
  }

  void require_compatible(const FrameConfig& frame) const;

  // DFT-domain embeddings of all samples, stacked channel-major per column
  // ((M*B) x K). Built once per frame shift and cached; the cache is what
  // makes the per-block probabilistic distance scan a single vectorized pass.
  const CMat& atf_cache(const FrameConfig& frame) const;

  // Binary corpus format, little-endian:
  //   magic "AIRS", u16 version = 1, u32 K, u16 B, u32 L, u32 fs,
  //   u64 provenance seed, then K*B*L IEEE-754 f64 values ordered
  //   (sample, channel, tap) row-major.
  void save(const std::filesystem::path& path) const;
  static TrainingSet load(const std::filesystem::path& path);

 private:
  Mat vectors_;  // Q x K
  int channels_ = 0;
  int taps_ = 0;
  int rate_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t geometry_hash_ = 0;

  mutable CMat atf_cache_;
  mutable int atf_cache_dft_len_ = -1;
};

}  // namespace airkf
