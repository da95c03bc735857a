// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>

#include "airkf/types.hpp"

namespace airkf {

// Block-processing geometry: filters of L taps, frame shift R, DFT length
// M = R + L, B loudspeakers, sampling rate fs.
struct FrameConfig {
  int L = 0;
  int R = 0;
  int M = 0;
  int B = 0;
  int fs = 0;

  FrameConfig() = default;
  FrameConfig(int taps, int shift, int channels, int rate)
      : L(taps), R(shift), M(taps + shift), B(channels), fs(rate) {
    if (L < 1 || R < 1 || B < 1 || fs <= 0)
      throw std::invalid_argument("FrameConfig: L, R, B must be >= 1 and fs > 0");
  }

  int q() const { return L * B; }

  bool operator==(const FrameConfig&) const = default;
};

// Per-channel history of the most recent M samples, advanced by R samples per
// block. Block tau covers samples tau*R-M+1 .. tau*R; the pre-signal region
// is zero. Single writer per stream.
class SignalHistory {
 public:
  explicit SignalHistory(const FrameConfig& frame)
      : frame_(frame), history_(Mat::Zero(frame.M, frame.B)) {}

  // samples: R x B, the new block for every channel.
  void push_block(const Eigen::Ref<const Mat>& samples) {
    if (samples.rows() != frame_.R || samples.cols() != frame_.B)
      throw std::invalid_argument("SignalHistory::push_block: block must be R x B");
    const int keep = frame_.M - frame_.R;
    history_.topRows(keep) = history_.bottomRows(keep).eval();
    history_.bottomRows(frame_.R) = samples;
  }

  // M x B window ordered oldest to newest.
  const Mat& window() const { return history_; }

  const FrameConfig& frame() const { return frame_; }

 private:
  FrameConfig frame_;
  Mat history_;
};

}  // namespace airkf
