// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace airkf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

inline constexpr double kSpeedOfSound = 343.0;  // m/s

// dB values are clipped to +-200 dB when a ratio degenerates to 0 or inf.
inline constexpr double kDbFloor = -200.0;
inline constexpr double kDbCeiling = 200.0;

}  // namespace airkf
