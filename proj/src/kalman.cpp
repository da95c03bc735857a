// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/kalman.hpp"

#include <stdexcept>

#include "airkf/dft.hpp"

namespace airkf {

namespace {
constexpr double kPsiNInit = 1e-10;
}

void KfHyperParams::validate() const {
  if (!(a > 0.0 && a <= 1.0))
    throw std::invalid_argument("KfHyperParams: need 0 < a <= 1");
  if (!(lambda_w >= 0.0 && lambda_w < 1.0) ||
      !(lambda_n >= 0.0 && lambda_n <= 1.0))
    throw std::invalid_argument("KfHyperParams: averaging factors out of range");
  if (!(p0 > 0.0)) throw std::invalid_argument("KfHyperParams: p0 must be > 0");
}

KalmanState::KalmanState(const FrameConfig& frame, const KfHyperParams& params)
    : frame_(frame), params_(params) {
  params_.validate();
  mean_ = CMat::Zero(frame.M, frame.B);
  p_.assign(static_cast<std::size_t>(frame.B) * frame.B, CVec());
  for (int i = 0; i < frame.B; ++i)
    for (int j = 0; j < frame.B; ++j)
      p_[index(i, j)] = i == j ? CVec::Constant(frame.M, cplx(params.p0, 0.0))
                               : CVec::Zero(frame.M);
  psi_w_ = Mat::Constant(frame.M, frame.B, params.p0);
  psi_dw_ = (1.0 - params.a * params.a) * psi_w_;
  psi_n_ = Vec::Constant(frame.M, kPsiNInit);
}

void KalmanState::set_mean(CMat mean) {
  if (mean.rows() != frame_.M || mean.cols() != frame_.B)
    throw std::invalid_argument("KalmanState::set_mean: shape mismatch");
  mean_ = std::move(mean);
}

Vec KalmanState::p_diag_stacked() const {
  Vec out(static_cast<Eigen::Index>(frame_.M) * frame_.B);
  for (int b = 0; b < frame_.B; ++b)
    out.segment(static_cast<Eigen::Index>(b) * frame_.M, frame_.M) = p_diag(b);
  return out;
}

CVec KalmanState::mean_stacked() const {
  CVec out(static_cast<Eigen::Index>(frame_.M) * frame_.B);
  for (int b = 0; b < frame_.B; ++b)
    out.segment(static_cast<Eigen::Index>(b) * frame_.M, frame_.M) = mean_.col(b);
  return out;
}

Mat KalmanState::time_domain_channels() const {
  Mat out(frame_.L, frame_.B);
  for (int b = 0; b < frame_.B; ++b)
    out.col(b) = extract_filter(mean_.col(b), frame_.L);
  return out;
}

Vec KalmanState::time_domain_stacked() const {
  const Mat channels = time_domain_channels();
  Vec out(frame_.q());
  for (int b = 0; b < frame_.B; ++b)
    out.segment(static_cast<Eigen::Index>(b) * frame_.L, frame_.L) =
        channels.col(b);
  return out;
}

PriorError prior_error(const KalmanState& state, const CMat& spectra,
                       const Eigen::Ref<const Vec>& mic_block) {
  const FrameConfig& frame = state.frame();
  if (spectra.rows() != frame.M || spectra.cols() != frame.B)
    throw std::invalid_argument("prior_error: spectra must be M x B");
  if (mic_block.size() != frame.R)
    throw std::invalid_argument("prior_error: mic block must have R samples");

  PriorError result;
  result.d_hat = Vec::Zero(frame.R);
  for (int b = 0; b < frame.B; ++b)
    result.d_hat += os_convolve(spectra.col(b), state.mean().col(b), frame.R);
  Vec embedded = Vec::Zero(frame.M);
  embedded.tail(frame.R) = mic_block - result.d_hat;
  result.e_plus = dft(embedded);
  return result;
}

void track_noise_covariances(KalmanState& state, const CVec& e_plus) {
  const KfHyperParams& hp = state.params_;
  const double a2 = hp.a * hp.a;
  state.psi_w_ = hp.lambda_w * state.psi_w_ +
                 (1.0 - hp.lambda_w) * state.mean_.cwiseAbs2();
  state.psi_dw_ = (1.0 - a2) * state.psi_w_;
  state.psi_n_ =
      hp.lambda_n * state.psi_n_ + (1.0 - hp.lambda_n) * e_plus.cwiseAbs2();
}

void kf_update(KalmanState& state, const CMat& spectra, const CVec& e_plus) {
  const FrameConfig& frame = state.frame_;
  const int channels = frame.B;
  if (spectra.rows() != frame.M || spectra.cols() != channels)
    throw std::invalid_argument("kf_update: spectra must be M x B");
  if (e_plus.size() != frame.M)
    throw std::invalid_argument("kf_update: e_plus must have M bins");

  const double a2 = state.params_.a * state.params_.a;
  const double bins_per_shift = static_cast<double>(frame.M) / frame.R;

  // Covariance prediction; the process noise is block-diagonal.
  std::vector<CVec> p_plus(state.p_.size());
  for (int i = 0; i < channels; ++i)
    for (int j = 0; j < channels; ++j) {
      CVec v = a2 * state.p_[state.index(i, j)];
      if (i == j) v += state.psi_dw_.col(i).cast<cplx>();
      p_plus[state.index(i, j)] = std::move(v);
    }

  // Innovation power per bin (scalar: single microphone).
  Vec innovation = bins_per_shift * state.psi_n_;
  for (int i = 0; i < channels; ++i)
    for (int j = 0; j < channels; ++j)
      innovation += (spectra.col(i).array() *
                     p_plus[state.index(i, j)].array() *
                     spectra.col(j).array().conjugate())
                        .real()
                        .matrix();
  // Guard against a degenerate denominator before any signal is observed.
  const double floor = 1e-10 * innovation.cwiseAbs().mean() + 1e-300;
  innovation = innovation.cwiseMax(floor);

  // Kalman gains and constrained mean update.
  std::vector<CVec> gain(channels);
  for (int i = 0; i < channels; ++i) {
    CVec numerator = CVec::Zero(frame.M);
    for (int j = 0; j < channels; ++j)
      numerator.array() += p_plus[state.index(i, j)].array() *
                           spectra.col(j).array().conjugate();
    gain[i] = numerator.array() / innovation.array().cast<cplx>();
    state.mean_.col(i) +=
        constrain_gradient(gain[i].cwiseProduct(e_plus), frame.L);
  }

  // Covariance update; Hermitian symmetry is restored explicitly and the
  // main diagonals are clamped at zero.
  std::vector<CVec> x_p(channels);  // sum_l X_l P+_lj per column j
  for (int j = 0; j < channels; ++j) {
    CVec acc = CVec::Zero(frame.M);
    for (int l = 0; l < channels; ++l)
      acc.array() +=
          spectra.col(l).array() * p_plus[state.index(l, j)].array();
    x_p[j] = std::move(acc);
  }
  const double shift_ratio = static_cast<double>(frame.R) / frame.M;
  for (int i = 0; i < channels; ++i)
    for (int j = i; j < channels; ++j) {
      CVec updated = p_plus[state.index(i, j)].array() -
                     shift_ratio * gain[i].array() * x_p[j].array();
      if (i == j) {
        state.p_[state.index(i, i)] =
            updated.real().cwiseMax(0.0).cast<cplx>();
      } else {
        state.p_[state.index(i, j)] = updated;
        state.p_[state.index(j, i)] = updated.conjugate();
      }
    }
  ++state.tau_;
}

}  // namespace airkf
