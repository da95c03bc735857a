// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "airkf/types.hpp"

namespace airkf {

enum class NnMetric { euclidean, kf };

// Squared Euclidean distance between time-domain AIR vectors.
double distance_euclidean(const Eigen::Ref<const Vec>& a,
                          const Eigen::Ref<const Vec>& b);

// State-uncertainty weighted squared distance between stacked DFT-domain
// vectors: sum over channel/bin of |candidate - mean|^2 / p. Uncertainty
// entries are floored at 1e-12 before inversion.
double distance_kf(const Eigen::Ref<const CVec>& candidate,
                   const Eigen::Ref<const CVec>& mean,
                   const Eigen::Ref<const Vec>& p_diag);

// Indices of the k smallest-distance columns, ascending by (distance, index).
// Brute-force scan; deterministic including tie-breaks.
std::vector<int> knn_select_euclidean(const Eigen::Ref<const Vec>& query,
                                      const Eigen::Ref<const Mat>& vectors,
                                      int k);

std::vector<int> knn_select_kf(const Eigen::Ref<const CVec>& query,
                               const Eigen::Ref<const CMat>& atf_columns,
                               const Eigen::Ref<const Vec>& p_diag, int k);

// Shared selection on a precomputed distance vector.
std::vector<int> smallest_k(const Vec& distances, int k);

}  // namespace airkf
