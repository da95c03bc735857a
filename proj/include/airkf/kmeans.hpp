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

#include "airkf/subspace.hpp"
#include "airkf/types.hpp"

namespace airkf {

struct KmeansResult {
  std::vector<int> assignments;        // one cluster index per sample
  Mat centroids;                       // Q x I
  std::vector<double> distortion_trace;  // per iteration, non-increasing
  int iterations = 0;
};

// Lloyd iterations with k-means++ seeding. Hard assignments, ties broken by
// lowest centroid index, empty clusters re-seeded from the farthest point,
// fixpoint or 300-iteration termination. Deterministic per seed.
KmeansResult kmeans(const Eigen::Ref<const Mat>& vectors, int clusters,
                    std::uint64_t seed);

// Clustered mixture of affine subspaces; per-cluster dimension is capped at
// member count - 1.
struct MixtureModel {
  std::vector<AffineSubspace> subspaces;
  Mat centroids;  // Q x I

  int size() const { return static_cast<int>(subspaces.size()); }
  int nearest_centroid(const Vec& w) const;
};

MixtureModel fit_mixture(const Eigen::Ref<const Mat>& vectors, int clusters,
                         int dim, std::uint64_t seed);

}  // namespace airkf
