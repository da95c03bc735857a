// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/fusion.hpp"

#include <cmath>
#include <stdexcept>

#include "airkf/dft.hpp"

namespace airkf {

void FusionConfig::validate() const {
  if (k_tau < 2) throw std::invalid_argument("FusionConfig: k_tau must be >= 2");
  if (!(beta_pr > 0.0))
    throw std::invalid_argument("FusionConfig: beta_pr must be positive");
  if (search_stride < 1)
    throw std::invalid_argument("FusionConfig: search_stride must be >= 1");
}

CMat project_kf_estimate(const KalmanState& state, const AffineSubspace& subspace) {
  const FrameConfig& frame = state.frame();
  if (subspace.offset().size() != frame.q())
    throw std::invalid_argument("project_kf_estimate: subspace dimension mismatch");
  const Vec projected = subspace.project(state.time_domain_stacked());
  CMat out(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b)
    out.col(b) = embed_filter(
        projected.segment(static_cast<Eigen::Index>(b) * frame.L, frame.L),
        frame.M);
  return out;
}

Mat model_prior_cov(const KalmanState& state, double beta_pr) {
  return beta_pr * state.psi_w();
}

DenoisedEstimate soft_combine(const KalmanState& state, const CMat& projected,
                              const Mat& psi_m, FusionMode mode) {
  const FrameConfig& frame = state.frame();
  DenoisedEstimate result;
  result.alpha.resize(frame.M, frame.B);
  result.mean.resize(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b) {
    if (mode == FusionMode::hard_projection) {
      result.alpha.col(b).setOnes();
      result.mean.col(b) = projected.col(b);
      continue;
    }
    const Vec p = state.p_diag(b);
    const Vec denom = p + psi_m.col(b);
    result.alpha.col(b) =
        (denom.array() > 0.0).select(p.array() / denom.array(), 0.0);
    result.mean.col(b) =
        state.mean().col(b).array() *
            (1.0 - result.alpha.col(b).array()).cast<cplx>() +
        projected.col(b).array() * result.alpha.col(b).array().cast<cplx>();
  }
  return result;
}

AspStep asp_step(KalmanState& state, const FusionConfig& fusion,
                 const TrainingSet& training, const CMat& spectra,
                 const Eigen::Ref<const Vec>& mic_block, SubspaceCache* cache) {
  fusion.validate();
  const FrameConfig& frame = state.frame();
  training.require_compatible(frame);
  if (fusion.k_tau > training.k())
    throw std::invalid_argument("asp_step: k_tau exceeds the corpus size");

  PriorError prior = prior_error(state, spectra, mic_block);
  track_noise_covariances(state, prior.e_plus);
  kf_update(state, spectra, prior.e_plus);

  const bool reuse = cache != nullptr && cache->subspace.has_value() &&
                     cache->age < fusion.search_stride;
  AffineSubspace local;
  if (reuse) {
    local = *cache->subspace;
    ++cache->age;
  } else {
    std::vector<int> neighbours;
    if (fusion.metric == NnMetric::euclidean) {
      neighbours = knn_select_euclidean(state.time_domain_stacked(),
                                        training.vectors(), fusion.k_tau);
    } else {
      neighbours =
          knn_select_kf(state.mean_stacked(), training.atf_cache(frame),
                        state.p_diag_stacked(), fusion.k_tau);
    }
    Mat members(training.q(), fusion.k_tau);
    for (int i = 0; i < fusion.k_tau; ++i)
      members.col(i) = training.vectors().col(neighbours[i]);
    local = build_knn_subspace(members);
    if (cache != nullptr) {
      cache->subspace = local;
      cache->age = 1;
    }
  }

  const CMat projected = project_kf_estimate(state, local);
  const Mat psi_m = model_prior_cov(state, fusion.beta_pr);
  AspStep step;
  step.denoised = soft_combine(state, projected, psi_m, fusion.mode);
  step.e_plus = std::move(prior.e_plus);
  step.d_hat = std::move(prior.d_hat);
  state.set_mean(step.denoised.mean);
  return step;
}

}  // namespace airkf
