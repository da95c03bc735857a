// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/subspace.hpp"

#include <stdexcept>

namespace airkf {

namespace {
constexpr double kRankTolerance = 1e-8;
}

AffineSubspace::AffineSubspace(Vec offset) : offset_(std::move(offset)) {
  basis_.resize(offset_.size(), 0);
}

AffineSubspace::AffineSubspace(Vec offset, const Mat& raw_basis)
    : offset_(std::move(offset)) {
  if (raw_basis.cols() == 0) {
    basis_.resize(offset_.size(), 0);
    return;
  }
  if (raw_basis.rows() != offset_.size())
    throw std::invalid_argument("AffineSubspace: basis rows must match offset");

  Eigen::ColPivHouseholderQR<Mat> qr(raw_basis);
  const Mat& r = qr.matrixR();
  const double leading = std::abs(r(0, 0));
  // A basis that is zero relative to the offset scale (numerically identical
  // neighbours) collapses to the offset-only subspace.
  const double degenerate_floor = 1e-12 * offset_.norm();
  Eigen::Index rank = 0;
  const Eigen::Index max_rank = std::min(raw_basis.rows(), raw_basis.cols());
  if (leading > degenerate_floor && leading > 0.0) {
    while (rank < max_rank &&
           std::abs(r(rank, rank)) >= kRankTolerance * leading)
      ++rank;
  }
  basis_ = qr.householderQ() * Mat::Identity(raw_basis.rows(), rank);
}

AffineSubspace AffineSubspace::from_orthonormal(Vec offset, Mat basis) {
  AffineSubspace subspace(std::move(offset));
  if (basis.rows() != subspace.offset_.size())
    throw std::invalid_argument("AffineSubspace: basis rows must match offset");
  subspace.basis_ = std::move(basis);
  return subspace;
}

Vec AffineSubspace::project(const Vec& w) const {
  if (w.size() != offset_.size())
    throw std::invalid_argument("AffineSubspace::project: length mismatch");
  if (dim() == 0) return offset_;
  const Vec centered = w - offset_;
  return offset_ + basis_ * (basis_.transpose() * centered);
}

Vec fit_offset(const Eigen::Ref<const Mat>& members) {
  if (members.cols() < 1)
    throw std::invalid_argument("fit_offset: need at least one member");
  return members.rowwise().mean();
}

PcaResult fit_basis_pca(const Eigen::Ref<const Mat>& members, const Vec& offset,
                        int dim) {
  const Eigen::Index n = members.cols();
  const Eigen::Index q = members.rows();
  if (n < 2) throw std::invalid_argument("fit_basis_pca: need >= 2 members");
  if (offset.size() != q)
    throw std::invalid_argument("fit_basis_pca: offset length mismatch");
  if (dim < 0 || dim > std::min(q, n - 1))
    throw std::invalid_argument("fit_basis_pca: dim must be in [0, min(Q, K-1)]");

  // Thin SVD of the centered data; singular pairs are the covariance
  // eigenpairs with eigenvalue sigma^2 / (K - 1), already sorted descending.
  Mat centered = members.colwise() - offset;
  Eigen::BDCSVD<Mat> svd(centered, Eigen::ComputeThinU);
  PcaResult result;
  result.basis = svd.matrixU().leftCols(dim);
  result.eigenvalues =
      svd.singularValues().head(dim).array().square() / double(n - 1);
  return result;
}

AffineSubspace build_knn_subspace(const Eigen::Ref<const Mat>& neighbours) {
  const Eigen::Index count = neighbours.cols();
  if (count < 1)
    throw std::invalid_argument("build_knn_subspace: need >= 1 neighbour");
  Vec offset = neighbours.rowwise().mean();
  if (count == 1) return AffineSubspace(std::move(offset));
  // Differences sum to zero, so one column is redundant; drop the farthest
  // neighbour (the last column in nearest-first order).
  Mat raw = neighbours.leftCols(count - 1).colwise() - offset;
  return AffineSubspace(std::move(offset), raw);
}

}  // namespace airkf
