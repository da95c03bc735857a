// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "airkf/types.hpp"

namespace airkf {

// Affine subspace of R^Q: an offset plus an orthonormal basis. Raw basis
// columns are orthogonalized by pivoted QR on construction; columns whose
// pivot falls below 1e-8 of the leading pivot are dropped, so the stored
// basis always has full column rank and projection needs no Gram solve.
class AffineSubspace {
 public:
  AffineSubspace() = default;

  // offset only (dimension 0)
  explicit AffineSubspace(Vec offset);

  // raw_basis: Q x D candidate directions, possibly rank deficient.
  AffineSubspace(Vec offset, const Mat& raw_basis);

  static AffineSubspace from_orthonormal(Vec offset, Mat basis);

  const Vec& offset() const { return offset_; }
  const Mat& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }

  Vec project(const Vec& w) const;

 private:
  Vec offset_;
  Mat basis_;  // Q x D, orthonormal columns
};

inline Vec project(const AffineSubspace& subspace, const Vec& w) {
  return subspace.project(w);
}

// Elementwise mean of the member columns.
Vec fit_offset(const Eigen::Ref<const Mat>& members);

struct PcaResult {
  Mat basis;        // Q x d, orthonormal
  Vec eigenvalues;  // d sample-covariance eigenvalues, non-increasing
};

// Top-d eigenspace of the sample covariance (1/(K-1) normalization) of the
// member columns around the given offset.
PcaResult fit_basis_pca(const Eigen::Ref<const Mat>& members, const Vec& offset,
                        int dim);

// Subspace spanned by nearest-neighbour differences: offset is the neighbour
// mean, basis columns are neighbour minus mean with the farthest neighbour
// omitted (columns must be ordered nearest first). Rank pruning applies.
AffineSubspace build_knn_subspace(const Eigen::Ref<const Mat>& neighbours);

}  // namespace airkf
