// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace airkf {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("wav: truncated file");
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

WavData read_wav_mono(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("wav: cannot open " + path.string());
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("wav: not a RIFF file");
  read_le<std::uint32_t>(in);  // riff size
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("wav: not a WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<char> data;
  bool have_fmt = false, have_data = false;
  while (in.read(tag, 4)) {
    const auto chunk_size = read_le<std::uint32_t>(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_le<std::uint16_t>(in);
      channels = read_le<std::uint16_t>(in);
      rate = read_le<std::uint32_t>(in);
      read_le<std::uint32_t>(in);  // byte rate
      read_le<std::uint16_t>(in);  // block align
      bits = read_le<std::uint16_t>(in);
      in.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
      if (!in) throw std::runtime_error("wav: truncated data chunk");
      have_data = true;
    } else {
      in.ignore(chunk_size + (chunk_size & 1));
    }
  }
  if (!have_fmt || !have_data)
    throw std::runtime_error("wav: missing fmt or data chunk");
  if (channels != 1) throw std::runtime_error("wav: only mono files supported");

  WavData wav;
  wav.fs = static_cast<int>(rate);
  if (format == 1 && bits == 16) {
    const std::size_t n = data.size() / 2;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::int16_t v;
      std::memcpy(&v, data.data() + 2 * i, 2);
      wav.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    const std::size_t n = data.size() / 4;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, data.data() + 4 * i, 4);
      wav.samples[i] = static_cast<double>(v);
    }
  } else {
    throw std::runtime_error("wav: unsupported format (need PCM16 or float32)");
  }
  return wav;
}

void write_wav_mono(const std::filesystem::path& path,
                    const Eigen::Ref<const Vec>& samples, int fs,
                    WavFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("wav: cannot open " + path.string());
  const bool pcm = format == WavFormat::pcm16;
  const std::uint32_t bytes_per_sample = pcm ? 2 : 4;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(samples.size()) * bytes_per_sample;

  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, pcm ? 1 : 3);
  write_le<std::uint16_t>(out, 1);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(fs));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(fs) * bytes_per_sample);
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(bytes_per_sample));
  write_le<std::uint16_t>(out, pcm ? 16 : 32);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_size);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (pcm) {
      const double clipped = std::min(std::max(samples[i], -1.0), 32767.0 / 32768.0);
      write_le<std::int16_t>(out,
                             static_cast<std::int16_t>(std::lround(clipped * 32768.0)));
    } else {
      write_le<float>(out, static_cast<float>(samples[i]));
    }
  }
  if (!out) throw std::runtime_error("wav: write failed");
}

Vec resample_sinc(const Eigen::Ref<const Vec>& input, int fs_in, int fs_out) {
  if (fs_in <= 0 || fs_out <= 0)
    throw std::invalid_argument("resample_sinc: rates must be positive");
  if (fs_in == fs_out) return input;
  const double ratio = static_cast<double>(fs_in) / fs_out;
  const double cutoff = std::min(1.0, 1.0 / ratio);  // of Nyquist(in)
  const int half = 16;
  const Eigen::Index n_out =
      static_cast<Eigen::Index>(std::floor(input.size() / ratio));
  Vec out(n_out);
  for (Eigen::Index k = 0; k < n_out; ++k) {
    const double center = k * ratio;
    const int lo = static_cast<int>(std::ceil(center)) - half;
    double acc = 0.0;
    for (int n = lo; n < lo + 2 * half; ++n) {
      if (n < 0 || n >= input.size()) continue;
      const double t = (n - center) * cutoff;
      const double sinc = t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t);
      const double win = 0.5 * (1.0 + std::cos(kPi * (n - center) / half));
      acc += input[n] * sinc * cutoff * win;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace airkf
