// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/distances.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace airkf {

namespace {
constexpr double kUncertaintyFloor = 1e-12;
}

double distance_euclidean(const Eigen::Ref<const Vec>& a,
                          const Eigen::Ref<const Vec>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance_euclidean: length mismatch");
  return (a - b).squaredNorm();
}

double distance_kf(const Eigen::Ref<const CVec>& candidate,
                   const Eigen::Ref<const CVec>& mean,
                   const Eigen::Ref<const Vec>& p_diag) {
  if (candidate.size() != mean.size() || candidate.size() != p_diag.size())
    throw std::invalid_argument("distance_kf: length mismatch");
  const Vec weights = p_diag.cwiseMax(kUncertaintyFloor).cwiseInverse();
  if (!(weights.array() > 0.0).all())
    throw std::runtime_error("distance_kf: non-positive uncertainty");
  return (candidate - mean).cwiseAbs2().dot(weights);
}

std::vector<int> smallest_k(const Vec& distances, int k) {
  const int count = static_cast<int>(distances.size());
  if (k < 1 || k > count)
    throw std::invalid_argument("knn_select: need 1 <= k <= K");
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  const auto by_distance_then_index = [&](int a, int b) {
    if (distances[a] != distances[b]) return distances[a] < distances[b];
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                   by_distance_then_index);
  std::sort(order.begin(), order.begin() + k, by_distance_then_index);
  order.resize(k);
  return order;
}

std::vector<int> knn_select_euclidean(const Eigen::Ref<const Vec>& query,
                                      const Eigen::Ref<const Mat>& vectors,
                                      int k) {
  if (query.size() != vectors.rows())
    throw std::invalid_argument("knn_select: query length mismatch");
  Vec distances(vectors.cols());
  for (Eigen::Index i = 0; i < vectors.cols(); ++i)
    distances[i] = (vectors.col(i) - query).squaredNorm();
  return smallest_k(distances, k);
}

std::vector<int> knn_select_kf(const Eigen::Ref<const CVec>& query,
                               const Eigen::Ref<const CMat>& atf_columns,
                               const Eigen::Ref<const Vec>& p_diag, int k) {
  if (query.size() != atf_columns.rows() || query.size() != p_diag.size())
    throw std::invalid_argument("knn_select: query length mismatch");
  const Vec weights = p_diag.cwiseMax(kUncertaintyFloor).cwiseInverse();
  Vec distances(atf_columns.cols());
  for (Eigen::Index i = 0; i < atf_columns.cols(); ++i)
    distances[i] = (atf_columns.col(i) - query).cwiseAbs2().dot(weights);
  return smallest_k(distances, k);
}

}  // namespace airkf
