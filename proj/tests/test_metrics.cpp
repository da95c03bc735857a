#include <doctest.h>

#include "airkf/metrics.hpp"
#include "airkf/rng.hpp"

using namespace airkf;

TEST_CASE("system mismatch reference points") {
  // zero estimate: the ratio is one per channel, 0 dB
  Mat truth(4, 1);
  truth << 1.0, 0.5, -0.25, 0.1;
  Mat zero = Mat::Zero(2, 1);
  CHECK(system_mismatch(truth, zero) == doctest::Approx(0.0));

  // perfect truncated match with fully supported truth clips to the floor
  Mat supported(4, 1);
  supported << 1.0, -2.0, 0.0, 0.0;
  Mat exact(2, 1);
  exact << 1.0, -2.0;
  CHECK(system_mismatch(supported, exact) == kDbFloor);

  // hand case: delta_0 and delta_1 truths, estimates delta_0 and zero
  Mat truth2 = Mat::Zero(4, 2);
  truth2(0, 0) = 1.0;  // channel 1: delta_0
  truth2(1, 1) = 1.0;  // channel 2: delta_1
  Mat estimate2 = Mat::Zero(2, 2);
  estimate2(0, 0) = 1.0;  // channel 1 perfect, channel 2 zero
  CHECK(system_mismatch(truth2, estimate2) ==
        doctest::Approx(10.0 * std::log10(0.5)).epsilon(1e-12));
}

TEST_CASE("system mismatch scale invariance and errors") {
  Rng rng(1);
  Mat truth(8, 2), estimate(4, 2);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 8; ++i) truth(i, b) = rng.normal();
    for (int i = 0; i < 4; ++i) estimate(i, b) = rng.normal();
  }
  const double base = system_mismatch(truth, estimate);
  CHECK(system_mismatch(Mat(3.7 * truth), Mat(3.7 * estimate)) ==
        doctest::Approx(base).epsilon(1e-12));

  Mat zero_truth = Mat::Zero(8, 1);
  Mat est1 = Mat::Zero(4, 1);
  CHECK_THROWS_AS(system_mismatch(zero_truth, est1), std::invalid_argument);
  CHECK_THROWS_AS(system_mismatch(estimate, truth), std::invalid_argument);
}

TEST_CASE("erle reference points") {
  Rng rng(2);
  Vec d(32);
  for (int i = 0; i < 32; ++i) d[i] = rng.normal();

  // exact prediction hits the ceiling
  ErleEstimator perfect(0.9);
  CHECK(perfect.update(d, d) == kDbCeiling);

  // zero prediction gives 0 dB for every block
  ErleEstimator silent(0.9);
  for (int step = 0; step < 10; ++step)
    CHECK(silent.update(d, Vec(Vec::Zero(32))) == doctest::Approx(0.0));

  // half-amplitude prediction settles at 10 log10(4) ~ 6.02 dB
  ErleEstimator half(0.9);
  double erle = 0.0;
  for (int step = 0; step < 200; ++step) erle = half.update(d, Vec(0.5 * d));
  CHECK(erle == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-9));
}

TEST_CASE("erle is invariant to joint scaling") {
  Rng rng(3);
  Vec d(16), d_hat(16);
  for (int i = 0; i < 16; ++i) {
    d[i] = rng.normal();
    d_hat[i] = rng.normal();
  }
  ErleEstimator a(0.95), b(0.95);
  double va = 0.0, vb = 0.0;
  for (int step = 0; step < 5; ++step) {
    va = a.update(d, d_hat);
    vb = b.update(Vec(2.5 * d), Vec(2.5 * d_hat));
  }
  CHECK(va == doctest::Approx(vb).epsilon(1e-12));
}

TEST_CASE("trial aggregation") {
  TrialLog log1, log2;
  log1.mismatch_db = Vec::Constant(5, -10.0);
  log1.erle_db = Vec::Constant(5, 4.0);
  log1.block_time_s = Vec::LinSpaced(5, 0.1, 0.5);
  log2 = log1;
  log2.mismatch_db = Vec::Constant(5, -20.0);
  log2.erle_db = Vec::Constant(5, 8.0);

  const AggregateCurves one = aggregate_trials({log1});
  CHECK((one.mismatch_db - log1.mismatch_db).cwiseAbs().maxCoeff() == 0.0);

  const AggregateCurves two = aggregate_trials({log1, log2});
  CHECK((two.mismatch_db.array() + 15.0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((two.erle_db.array() - 6.0).cwiseAbs().maxCoeff() < 1e-12);

  // 50 synthetic logs against a direct summation
  Rng rng(4);
  std::vector<TrialLog> logs(50);
  Vec expected = Vec::Zero(7);
  for (auto& log : logs) {
    log.mismatch_db.resize(7);
    log.erle_db = Vec::Zero(7);
    log.block_time_s = Vec::Zero(7);
    for (int i = 0; i < 7; ++i) log.mismatch_db[i] = rng.normal() * 10.0;
    expected += log.mismatch_db;
  }
  expected /= 50.0;
  const AggregateCurves mean = aggregate_trials(logs);
  CHECK((mean.mismatch_db - expected).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(aggregate_trials({}), std::invalid_argument);
  TrialLog ragged;
  ragged.mismatch_db = Vec::Zero(3);
  ragged.erle_db = Vec::Zero(3);
  CHECK_THROWS_AS(aggregate_trials({log1, ragged}), std::invalid_argument);
}

TEST_CASE("linear-domain aggregation differs as expected") {
  TrialLog log1, log2;
  log1.mismatch_db = Vec::Constant(1, 0.0);
  log1.erle_db = Vec::Constant(1, 0.0);
  log2 = log1;
  log2.mismatch_db = Vec::Constant(1, -20.0);
  const AggregateCurves linear = aggregate_trials({log1, log2}, true);
  // mean of ratios 1 and 0.01 is 0.505 -> ~ -2.97 dB
  CHECK(linear.mismatch_db[0] ==
        doctest::Approx(10.0 * std::log10(0.505)).epsilon(1e-12));
}
