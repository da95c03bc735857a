// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "airkf/types.hpp"

namespace airkf {

// Channel-averaged logarithmic system mismatch in dB between the true AIRs
// (W x B) and an L-tap estimate (L x B), the estimate zero-padded to W.
// A perfect match clips to -200 dB; an all-zero estimate gives 0 dB.
double system_mismatch(const Eigen::Ref<const Mat>& truth,
                       const Eigen::Ref<const Mat>& estimate);

// Echo return loss enhancement with recursive averaging of both powers.
// d_hat is the predicted noise-free observation of the current block.
class ErleEstimator {
 public:
  explicit ErleEstimator(double lambda = 0.99);

  double update(const Eigen::Ref<const Vec>& d_clean,
                const Eigen::Ref<const Vec>& d_hat);

 private:
  double lambda_;
  double num_ = 0.0;
  double den_ = 0.0;
  bool primed_ = false;
};

struct TrialLog {
  Vec mismatch_db;
  Vec erle_db;
  Vec block_time_s;
  std::uint64_t trial_seed = 0;
};

struct AggregateCurves {
  Vec mismatch_db;
  Vec erle_db;
};

// Per-block arithmetic mean across trials. Averages in the dB domain by
// default; linear_domain averages the power ratios instead.
AggregateCurves aggregate_trials(const std::vector<TrialLog>& logs,
                                 bool linear_domain = false);

}  // namespace airkf
