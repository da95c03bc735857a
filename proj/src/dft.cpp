// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/dft.hpp"

#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace airkf {

namespace {

// One FFT engine per thread; it caches plans per transform size internally.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

CVec dft(const Eigen::Ref<const Vec>& x) {
  if (x.size() == 0) throw std::invalid_argument("dft: empty input");
  CVec out(x.size());
  Vec tmp = x;
  engine().fwd(out, tmp);
  return out;
}

CVec dft(const Eigen::Ref<const CVec>& x) {
  if (x.size() == 0) throw std::invalid_argument("dft: empty input");
  CVec out(x.size());
  CVec tmp = x;
  engine().fwd(out, tmp);
  return out;
}

CVec idft(const Eigen::Ref<const CVec>& spectrum) {
  if (spectrum.size() == 0) throw std::invalid_argument("idft: empty input");
  CVec out(spectrum.size());
  CVec tmp = spectrum;
  engine().inv(out, tmp);
  return out;
}

Vec idft_real(const Eigen::Ref<const CVec>& spectrum) {
  return idft(spectrum).real();
}

CVec embed_filter(const Eigen::Ref<const Vec>& air, int dft_len) {
  if (air.size() < 1 || air.size() > dft_len)
    throw std::invalid_argument("embed_filter: filter length must be in [1, M]");
  Vec padded = Vec::Zero(dft_len);
  padded.head(air.size()) = air;
  return dft(padded);
}

Vec extract_filter(const Eigen::Ref<const CVec>& atf, int taps) {
  if (taps < 1 || taps > atf.size())
    throw std::invalid_argument("extract_filter: taps must be in [1, M]");
  return idft(atf).head(taps).real();
}

CVec constrain_gradient(const Eigen::Ref<const CVec>& atf, int taps) {
  if (taps < 1 || taps > atf.size())
    throw std::invalid_argument("constrain_gradient: taps must be in [1, M]");
  CVec t = idft(atf);
  t.tail(atf.size() - taps).setZero();
  return dft(t);
}

Vec os_convolve(const Eigen::Ref<const CVec>& signal_spectrum,
                const Eigen::Ref<const CVec>& atf, int shift) {
  if (signal_spectrum.size() != atf.size())
    throw std::invalid_argument("os_convolve: spectrum length mismatch");
  if (shift < 1 || shift > signal_spectrum.size())
    throw std::invalid_argument("os_convolve: shift must be in [1, M]");
  const CVec product = signal_spectrum.cwiseProduct(atf);
  return idft(product).tail(shift).real();
}

}  // namespace airkf
