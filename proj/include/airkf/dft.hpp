// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "airkf/types.hpp"

namespace airkf {

// DFT convention used throughout: unnormalized forward transform, the inverse
// carries the 1/M factor. Parseval therefore reads ||dft(x)||^2 = M ||x||^2.

CVec dft(const Eigen::Ref<const Vec>& x);
CVec dft(const Eigen::Ref<const CVec>& x);
CVec idft(const Eigen::Ref<const CVec>& spectrum);

// Real part of the inverse transform; valid for conjugate-symmetric spectra.
Vec idft_real(const Eigen::Ref<const CVec>& spectrum);

// Zero-pad a length-L filter to M taps and transform: the ATF of an AIR.
CVec embed_filter(const Eigen::Ref<const Vec>& air, int dft_len);

// First L time-domain taps of an ATF; round-trips embed_filter exactly.
Vec extract_filter(const Eigen::Ref<const CVec>& atf, int taps);

// Projector onto spectra whose time-domain image has a zero last-R tail
// (filter support within the first L = M - R taps). Idempotent.
CVec constrain_gradient(const Eigen::Ref<const CVec>& atf, int taps);

// Overlap-save block convolution: the last R time-domain samples of the
// circular product of a length-M signal spectrum with a tail-embedded ATF.
Vec os_convolve(const Eigen::Ref<const CVec>& signal_spectrum,
                const Eigen::Ref<const CVec>& atf, int shift);

}  // namespace airkf
