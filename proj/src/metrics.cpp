// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace airkf {

namespace {

double ratio_to_db(double ratio) {
  if (!(ratio > 0.0)) return kDbFloor;
  const double db = 10.0 * std::log10(ratio);
  return std::min(std::max(db, kDbFloor), kDbCeiling);
}

}  // namespace

double system_mismatch(const Eigen::Ref<const Mat>& truth,
                       const Eigen::Ref<const Mat>& estimate) {
  const Eigen::Index w = truth.rows();
  const Eigen::Index l = estimate.rows();
  if (truth.cols() != estimate.cols())
    throw std::invalid_argument("system_mismatch: channel count mismatch");
  if (l > w)
    throw std::invalid_argument("system_mismatch: estimate longer than truth");

  double mean_ratio = 0.0;
  for (Eigen::Index b = 0; b < truth.cols(); ++b) {
    const double denom = truth.col(b).squaredNorm();
    if (!(denom > 0.0))
      throw std::invalid_argument("system_mismatch: zero-norm truth channel");
    const double num = (truth.col(b).head(l) - estimate.col(b)).squaredNorm() +
                       truth.col(b).tail(w - l).squaredNorm();
    mean_ratio += num / denom;
  }
  mean_ratio /= static_cast<double>(truth.cols());
  return ratio_to_db(mean_ratio);
}

ErleEstimator::ErleEstimator(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("ErleEstimator: lambda must be in [0, 1)");
}

double ErleEstimator::update(const Eigen::Ref<const Vec>& d_clean,
                             const Eigen::Ref<const Vec>& d_hat) {
  if (d_clean.size() != d_hat.size())
    throw std::invalid_argument("ErleEstimator: block length mismatch");
  const double clean = d_clean.squaredNorm();
  const double residual = (d_clean - d_hat).squaredNorm();
  if (!primed_) {
    num_ = clean;
    den_ = residual;
    primed_ = true;
  } else {
    num_ = lambda_ * num_ + (1.0 - lambda_) * clean;
    den_ = lambda_ * den_ + (1.0 - lambda_) * residual;
  }
  if (den_ <= 0.0) return kDbCeiling;
  return ratio_to_db(num_ / den_);
}

AggregateCurves aggregate_trials(const std::vector<TrialLog>& logs,
                                 bool linear_domain) {
  if (logs.empty())
    throw std::invalid_argument("aggregate_trials: no trial logs");
  const Eigen::Index n = logs.front().mismatch_db.size();
  for (const auto& log : logs)
    if (log.mismatch_db.size() != n || log.erle_db.size() != n)
      throw std::invalid_argument("aggregate_trials: unequal log lengths");

  AggregateCurves curves;
  const auto combine = [&](auto member) {
    Vec out = Vec::Zero(n);
    if (linear_domain) {
      for (const auto& log : logs)
        out += Eigen::pow(10.0, (log.*member).array() / 10.0).matrix();
      out /= static_cast<double>(logs.size());
      return Vec(10.0 * out.array().log10());
    }
    for (const auto& log : logs) out += log.*member;
    return Vec(out / static_cast<double>(logs.size()));
  };
  curves.mismatch_db = combine(&TrialLog::mismatch_db);
  curves.erle_db = combine(&TrialLog::erle_db);
  return curves;
}

}  // namespace airkf
