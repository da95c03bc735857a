// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "airkf/rng.hpp"
#include "airkf/types.hpp"

namespace airkf {

// Synthetic speech-like signal: white noise shaped by an AR(8) vocal-tract
// filter with per-talker formant jitter, amplitude-modulated at syllabic
// rate, with random pause gaps. Unit RMS over the whole signal. Used so
// speech-excited scenarios run without any external corpus.
Vec speech_like(int num_samples, int fs, Rng& rng);

// Activity gate in [0, 1] with 20 ms ramps: 1 during talk spurts, 0 during
// pauses. Exposed for the teleconference source switching.
Vec activity_gate(int num_samples, int fs, Rng& rng);

}  // namespace airkf
