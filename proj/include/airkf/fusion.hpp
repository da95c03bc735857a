// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>

#include "airkf/distances.hpp"
#include "airkf/kalman.hpp"
#include "airkf/subspace.hpp"
#include "airkf/training_set.hpp"
#include "airkf/types.hpp"

namespace airkf {

enum class FusionMode { hard_projection, soft_combination };

struct FusionConfig {
  int k_tau = 80;           // neighbourhood size
  double beta_pr = 5.0;     // model prior scale; +inf disables the fusion
  NnMetric metric = NnMetric::kf;
  FusionMode mode = FusionMode::soft_combination;
  double p0 = 0.1;          // initial uncertainty for the fused estimator
  int search_stride = 1;    // rebuild the subspace every `stride` blocks

  void validate() const;
};

struct DenoisedEstimate {
  CMat mean;  // M x B
  Mat alpha;  // M x B combination weights in [0, 1]
};

// Projection of the KF mean through the time domain: extract the stacked
// L-tap filter, project onto the subspace, re-embed each channel.
CMat project_kf_estimate(const KalmanState& state, const AffineSubspace& subspace);

// Model prior uncertainty: beta_pr * psi_w per channel and bin. Equivalent
// to beta_pr / (1 - a^2) times the process noise for a < 1, and finite for
// a = 1 where that quotient form degenerates.
Mat model_prior_cov(const KalmanState& state, double beta_pr);

// Per-bin convex combination of the KF mean and its projection with weight
// alpha = P / (P + psi_m); hard mode forces alpha = 1, a zero denominator
// falls back to alpha = 0 (trust the filter).
DenoisedEstimate soft_combine(const KalmanState& state, const CMat& projected,
                              const Mat& psi_m, FusionMode mode);

// Reusable neighbourhood subspace between strided searches.
struct SubspaceCache {
  std::optional<AffineSubspace> subspace;
  int age = 0;
};

struct AspStep {
  DenoisedEstimate denoised;
  CVec e_plus;
  Vec d_hat;
};

// One block of the fused estimator: prior error, noise tracking, KF update,
// neighbour search, subspace projection, convex combination, and write-back
// of the denoised mean (the state uncertainty is left untouched).
AspStep asp_step(KalmanState& state, const FusionConfig& fusion,
                 const TrainingSet& training, const CMat& spectra,
                 const Eigen::Ref<const Vec>& mic_block,
                 SubspaceCache* cache = nullptr);

}  // namespace airkf
