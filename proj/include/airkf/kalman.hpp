// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "airkf/frame.hpp"
#include "airkf/types.hpp"

namespace airkf {

struct KfHyperParams {
  double a = 0.9999;      // state transition coefficient
  double lambda_w = 0.9;  // recursive averaging factor for the ATF power
  double lambda_n = 0.5;  // recursive averaging factor for the noise PSD
  double p0 = 0.01;       // initial state uncertainty scale

  void validate() const;
};

// Posterior state of the DFT-domain Kalman filter: per-channel ATF mean,
// diagonal-submatrix state uncertainty P_ij, and the tracked noise
// covariance diagonals. Mutated sequentially, one instance per stream.
class KalmanState {
 public:
  KalmanState(const FrameConfig& frame, const KfHyperParams& params);

  const FrameConfig& frame() const { return frame_; }
  const KfHyperParams& params() const { return params_; }
  long tau() const { return tau_; }

  const CMat& mean() const { return mean_; }
  void set_mean(CMat mean);

  // diag(P_ij), length M. P_ij = conj(P_ji) holds by construction.
  const CVec& p(int i, int j) const { return p_[index(i, j)]; }

  // Real, clamped main diagonal of P_bb.
  Vec p_diag(int b) const { return p_[index(b, b)].real().cwiseMax(0.0); }

  // All B main diagonals stacked channel-major (length M*B).
  Vec p_diag_stacked() const;

  // Stacked channel-major copy of the mean (length M*B).
  CVec mean_stacked() const;

  const Mat& psi_w() const { return psi_w_; }
  const Mat& psi_dw() const { return psi_dw_; }
  const Vec& psi_n() const { return psi_n_; }

  // Time-domain filter estimate, L x B.
  Mat time_domain_channels() const;
  // Same, stacked channel-major into a Q vector.
  Vec time_domain_stacked() const;

 private:
  friend void track_noise_covariances(KalmanState&, const CVec&);
  friend void kf_update(KalmanState&, const CMat&, const CVec&);

  int index(int i, int j) const { return i * frame_.B + j; }

  FrameConfig frame_;
  KfHyperParams params_;
  CMat mean_;               // M x B
  std::vector<CVec> p_;     // B*B diagonals, row-major (i, j)
  Mat psi_w_;               // M x B
  Mat psi_dw_;              // M x B
  Vec psi_n_;               // M
  long tau_ = 0;
};

struct PriorError {
  CVec e_plus;  // DFT of the tail-embedded block error, length M
  Vec d_hat;    // predicted noise-free observation, length R
};

// e+ = F Q1 (y - sum_b Q1^T F^-1 X_b w_b); the prediction uses the previous
// mean with unit state transition.
PriorError prior_error(const KalmanState& state, const CMat& spectra,
                       const Eigen::Ref<const Vec>& mic_block);

// Exponential tracking of the ATF power, process noise and observation noise
// diagonals from the current prior error.
void track_noise_covariances(KalmanState& state, const CVec& e_plus);

// One covariance prediction / gain / mean / covariance update, gradient
// constrained per channel. All per-bin quantities are scalar; negative
// posterior diagonals from the subtraction form are clamped to zero.
void kf_update(KalmanState& state, const CMat& spectra, const CVec& e_plus);

}  // namespace airkf
