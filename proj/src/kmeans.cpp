// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "airkf/rng.hpp"

namespace airkf {

namespace {

constexpr int kMaxIterations = 300;

// k-means++: each next centroid drawn with probability proportional to the
// squared distance to the closest centroid chosen so far.
Mat seed_centroids(const Eigen::Ref<const Mat>& vectors, int clusters, Rng& rng) {
  const Eigen::Index k = vectors.cols();
  Mat centroids(vectors.rows(), clusters);
  centroids.col(0) = vectors.col(static_cast<Eigen::Index>(rng.below(k)));
  Vec d2 = (vectors.colwise() - centroids.col(0)).colwise().squaredNorm();
  for (int c = 1; c < clusters; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < k; ++i) {
        target -= d2[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(k));
    }
    centroids.col(c) = vectors.col(pick);
    d2 = d2.cwiseMin(
        (vectors.colwise() - centroids.col(c)).colwise().squaredNorm().transpose());
  }
  return centroids;
}

}  // namespace

KmeansResult kmeans(const Eigen::Ref<const Mat>& vectors, int clusters,
                    std::uint64_t seed) {
  const Eigen::Index k = vectors.cols();
  if (clusters < 1 || clusters > k)
    throw std::invalid_argument("kmeans: need 1 <= clusters <= K");

  Rng rng(derive_seed(seed, SeedStream::kmeans, 0));
  KmeansResult result;
  result.centroids = seed_centroids(vectors, clusters, rng);
  result.assignments.assign(k, -1);

  Mat dist2(k, clusters);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (int c = 0; c < clusters; ++c)
      dist2.col(c) =
          (vectors.colwise() - result.centroids.col(c)).colwise().squaredNorm();

    bool changed = false;
    double distortion = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      int best = 0;
      double best_d = dist2(i, 0);
      for (int c = 1; c < clusters; ++c) {
        if (dist2(i, c) < best_d) {
          best_d = dist2(i, c);
          best = c;
        }
      }
      distortion += best_d;
      if (result.assignments[i] != best) {
        result.assignments[i] = best;
        changed = true;
      }
    }
    result.distortion_trace.push_back(distortion);
    result.iterations = iter + 1;
    if (!changed) break;

    Mat sums = Mat::Zero(vectors.rows(), clusters);
    std::vector<int> counts(clusters, 0);
    for (Eigen::Index i = 0; i < k; ++i) {
      sums.col(result.assignments[i]) += vectors.col(i);
      ++counts[result.assignments[i]];
    }
    for (int c = 0; c < clusters; ++c) {
      if (counts[c] > 0) {
        result.centroids.col(c) = sums.col(c) / counts[c];
      } else {
        // Re-seed an empty cluster from the point farthest from its centroid.
        Eigen::Index farthest = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < k; ++i) {
          const double d =
              (vectors.col(i) - result.centroids.col(result.assignments[i]))
                  .squaredNorm();
          if (d > far_d) {
            far_d = d;
            farthest = i;
          }
        }
        result.centroids.col(c) = vectors.col(farthest);
      }
    }
  }
  return result;
}

int MixtureModel::nearest_centroid(const Vec& w) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < size(); ++c) {
    const double d = (w - centroids.col(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

MixtureModel fit_mixture(const Eigen::Ref<const Mat>& vectors, int clusters,
                         int dim, std::uint64_t seed) {
  const KmeansResult clustering = kmeans(vectors, clusters, seed);
  MixtureModel model;
  model.centroids = clustering.centroids;
  model.subspaces.reserve(clusters);
  for (int c = 0; c < clusters; ++c) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < vectors.cols(); ++i)
      if (clustering.assignments[i] == c) members.push_back(i);
    Mat local(vectors.rows(), members.size());
    for (std::size_t m = 0; m < members.size(); ++m)
      local.col(m) = vectors.col(members[m]);

    const Vec offset = members.empty() ? Vec(model.centroids.col(c))
                                       : fit_offset(local);
    const int capped =
        std::min<int>(dim, std::max<int>(0, static_cast<int>(members.size()) - 1));
    if (capped == 0) {
      model.subspaces.emplace_back(offset);
    } else {
      PcaResult pca = fit_basis_pca(local, offset, capped);
      model.subspaces.push_back(
          AffineSubspace::from_orthonormal(offset, std::move(pca.basis)));
    }
  }
  return model;
}

}  // namespace airkf
