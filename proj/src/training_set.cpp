// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/training_set.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "airkf/dft.hpp"

namespace airkf {

namespace {

constexpr char kMagic[4] = {'A', 'I', 'R', 'S'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
  // Build/test platforms here are little-endian; the format is defined LE.
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("TrainingSet: truncated corpus file");
  return value;
}

}  // namespace

TrainingSet::TrainingSet(Mat vectors, int channels, int taps, int rate,
                         std::uint64_t seed, std::uint64_t geometry_hash)
    : vectors_(std::move(vectors)),
      channels_(channels),
      taps_(taps),
      rate_(rate),
      seed_(seed),
      geometry_hash_(geometry_hash) {
  if (channels_ < 1 || taps_ < 1 || rate_ <= 0)
    throw std::invalid_argument("TrainingSet: invalid shape metadata");
  if (vectors_.rows() != static_cast<Eigen::Index>(channels_) * taps_)
    throw std::invalid_argument("TrainingSet: vectors must be (L*B) x K");
  if (vectors_.cols() < 1)
    throw std::invalid_argument("TrainingSet: need at least one sample");
  if (!vectors_.allFinite())
    throw std::invalid_argument("TrainingSet: non-finite entries");
}

void TrainingSet::require_compatible(const FrameConfig& frame) const {
  if (frame.B != channels_ || frame.L != taps_ || frame.fs != rate_)
    throw std::invalid_argument(
        "TrainingSet: corpus (B, L, fs) does not match the frame config");
}

const CMat& TrainingSet::atf_cache(const FrameConfig& frame) const {
  require_compatible(frame);
  if (atf_cache_dft_len_ == frame.M) return atf_cache_;
  atf_cache_.resize(static_cast<Eigen::Index>(frame.M) * channels_, k());
  for (int i = 0; i < k(); ++i) {
    for (int b = 0; b < channels_; ++b) {
      atf_cache_.col(i).segment(static_cast<Eigen::Index>(b) * frame.M,
                                frame.M) = embed_filter(channel(i, b), frame.M);
    }
  }
  atf_cache_dft_len_ = frame.M;
  return atf_cache_;
}

void TrainingSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("TrainingSet: cannot open " + path.string());
  out.write(kMagic, 4);
  write_le<std::uint16_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(k()));
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(channels_));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(taps_));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(rate_));
  write_le<std::uint64_t>(out, seed_);
  for (int i = 0; i < k(); ++i)
    for (int b = 0; b < channels_; ++b)
      for (int l = 0; l < taps_; ++l)
        write_le<double>(out, vectors_(static_cast<Eigen::Index>(b) * taps_ + l, i));
  if (!out) throw std::runtime_error("TrainingSet: write failed");
}

TrainingSet TrainingSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("TrainingSet: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("TrainingSet: bad magic in " + path.string());
  const auto version = read_le<std::uint16_t>(in);
  if (version != kVersion)
    throw std::runtime_error("TrainingSet: unsupported format version");
  const auto count = read_le<std::uint32_t>(in);
  const auto channels = read_le<std::uint16_t>(in);
  const auto taps = read_le<std::uint32_t>(in);
  const auto rate = read_le<std::uint32_t>(in);
  const auto seed = read_le<std::uint64_t>(in);
  if (count < 1 || channels < 1 || taps < 1 || rate < 1)
    throw std::runtime_error("TrainingSet: corrupt header");
  Mat vectors(static_cast<Eigen::Index>(channels) * taps, count);
  for (std::uint32_t i = 0; i < count; ++i)
    for (std::uint32_t b = 0; b < channels; ++b)
      for (std::uint32_t l = 0; l < taps; ++l)
        vectors(static_cast<Eigen::Index>(b) * taps + l, i) = read_le<double>(in);
  return TrainingSet(std::move(vectors), channels, static_cast<int>(taps),
                     static_cast<int>(rate), seed);
}

}  // namespace airkf
