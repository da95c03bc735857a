// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>

#include "airkf/types.hpp"

namespace airkf {

struct WavData {
  Vec samples;  // normalized to [-1, 1] for PCM
  int fs = 0;
};

// Reads mono RIFF/WAVE, PCM 16-bit or IEEE float 32-bit.
WavData read_wav_mono(const std::filesystem::path& path);

enum class WavFormat { pcm16, float32 };

void write_wav_mono(const std::filesystem::path& path,
                    const Eigen::Ref<const Vec>& samples, int fs,
                    WavFormat format = WavFormat::pcm16);

// Windowed-sinc sample-rate conversion.
Vec resample_sinc(const Eigen::Ref<const Vec>& input, int fs_in, int fs_out);

}  // namespace airkf
