#include <doctest.h>

#include <limits>

#include "airkf/dft.hpp"
#include "airkf/fusion.hpp"
#include "airkf/metrics.hpp"
#include "airkf/rng.hpp"
#include "airkf/scenario.hpp"

using namespace airkf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec random_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

TrainingSet random_training(int channels, int taps, int count, Rng& rng) {
  Mat vectors(channels * taps, count);
  for (int j = 0; j < count; ++j) vectors.col(j) = random_vec(channels * taps, rng);
  return TrainingSet(std::move(vectors), channels, taps, 8000, 1);
}

CMat spectra_of(const Mat& window) {
  CMat s(window.rows(), window.cols());
  for (int b = 0; b < window.cols(); ++b) s.col(b) = dft(window.col(b));
  return s;
}

void set_time_domain_mean(KalmanState& state, const Vec& stacked) {
  const FrameConfig& frame = state.frame();
  CMat mean(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b)
    mean.col(b) = embed_filter(
        stacked.segment(static_cast<Eigen::Index>(b) * frame.L, frame.L),
        frame.M);
  state.set_mean(mean);
}

}  // namespace

TEST_CASE("project_kf_estimate fixed point and composition") {
  Rng rng(1);
  const FrameConfig frame(6, 6, 2, 8000);
  KalmanState state(frame, KfHyperParams{});

  Mat neighbours(frame.q(), 4);
  for (int j = 0; j < 4; ++j) neighbours.col(j) = random_vec(frame.q(), rng);
  const AffineSubspace subspace = build_knn_subspace(neighbours);

  // a mean already in the subspace is unchanged
  const Vec inside = subspace.project(random_vec(frame.q(), rng));
  set_time_domain_mean(state, inside);
  const CMat projected = project_kf_estimate(state, subspace);
  CHECK((projected - state.mean()).cwiseAbs().maxCoeff() <
        1e-9 * (1.0 + inside.norm()));

  // composition oracle: embed(project(extract(mean)))
  set_time_domain_mean(state, random_vec(frame.q(), rng));
  const CMat via_op = project_kf_estimate(state, subspace);
  const Vec extracted = state.time_domain_stacked();
  const Vec composed = subspace.project(extracted);
  for (int b = 0; b < frame.B; ++b) {
    const CVec expected = embed_filter(
        composed.segment(static_cast<Eigen::Index>(b) * frame.L, frame.L),
        frame.M);
    CHECK((via_op.col(b) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }

  // a zero-dimensional subspace embeds the offset
  const AffineSubspace point(Vec(random_vec(frame.q(), rng)));
  const CMat offset_atf = project_kf_estimate(state, point);
  for (int b = 0; b < frame.B; ++b) {
    const CVec expected = embed_filter(
        point.offset().segment(static_cast<Eigen::Index>(b) * frame.L, frame.L),
        frame.M);
    CHECK((offset_atf.col(b) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("model prior covariance is the scaled tracked power") {
  const FrameConfig frame(4, 4, 2, 8000);
  KfHyperParams hp;
  KalmanState state(frame, hp);
  Rng rng(2);
  // evolve psi_w away from its initial value
  CVec e(frame.M);
  for (int i = 0; i < frame.M; ++i) e[i] = cplx(rng.normal(), rng.normal());
  CMat mean(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b)
    for (int f = 0; f < frame.M; ++f)
      mean(f, b) = cplx(rng.normal(), rng.normal());
  state.set_mean(mean);
  track_noise_covariances(state, e);

  const Mat psi_m = model_prior_cov(state, 5.0);
  CHECK((psi_m - 5.0 * state.psi_w()).cwiseAbs().maxCoeff() < 1e-12);
  // homogeneity
  CHECK((model_prior_cov(state, 10.0) - 2.0 * psi_m).cwiseAbs().maxCoeff() <
        1e-12);
  // the Eq. 45 identity: beta/(1-a^2) * psi_dw equals beta * psi_w for a < 1
  const double a2 = hp.a * hp.a;
  const Mat via_dw = 5.0 / (1.0 - a2) * state.psi_dw();
  CHECK((psi_m - via_dw).cwiseAbs().maxCoeff() < 1e-12 * psi_m.maxCoeff());
}

TEST_CASE("zero tracked power gives full trust in the projection") {
  // psi_w = 0 is reachable only through the limit; emulate by beta = 0
  const FrameConfig frame(4, 4, 1, 8000);
  KalmanState state(frame, KfHyperParams{});
  const Mat psi_m = Mat::Zero(frame.M, 1);
  Rng rng(3);
  CMat projected(frame.M, 1);
  for (int f = 0; f < frame.M; ++f) projected(f, 0) = cplx(rng.normal(), 0.0);
  const DenoisedEstimate den =
      soft_combine(state, projected, psi_m, FusionMode::soft_combination);
  CHECK((den.alpha.array() == 1.0).all());
  CHECK((den.mean - projected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("soft combination weights") {
  const FrameConfig frame(4, 4, 1, 8000);
  Rng rng(4);

  // alpha = 0.5 when P equals the prior
  KfHyperParams hp;
  hp.p0 = 0.1;
  KalmanState state(frame, hp);
  CMat projected(frame.M, 1);
  for (int f = 0; f < frame.M; ++f)
    projected(f, 0) = cplx(rng.normal(), rng.normal());
  const Mat equal_prior = model_prior_cov(state, 1.0);  // = psi_w = p0 = P
  const DenoisedEstimate mid =
      soft_combine(state, projected, equal_prior, FusionMode::soft_combination);
  CHECK((mid.alpha.array() - 0.5).cwiseAbs().maxCoeff() < 1e-12);
  const CMat midpoint = 0.5 * (state.mean() + projected);
  CHECK((mid.mean - midpoint).cwiseAbs().maxCoeff() < 1e-12);

  // alpha -> 0 as the prior grows
  const Mat huge = Mat::Constant(frame.M, 1, kInf);
  const DenoisedEstimate kf_only =
      soft_combine(state, projected, huge, FusionMode::soft_combination);
  CHECK((kf_only.alpha.array() == 0.0).all());
  CHECK((kf_only.mean - state.mean()).cwiseAbs().maxCoeff() == 0.0);

  // hand value: P = 3, psi_m = 1 -> alpha = 0.75
  KfHyperParams hp3;
  hp3.p0 = 3.0;
  KalmanState state3(frame, hp3);
  const Mat ones = Mat::Ones(frame.M, 1);
  const DenoisedEstimate quarter =
      soft_combine(state3, projected, ones, FusionMode::soft_combination);
  CHECK((quarter.alpha.array() - 0.75).cwiseAbs().maxCoeff() < 1e-12);

  // hard mode pins alpha to one
  const DenoisedEstimate hard =
      soft_combine(state3, projected, ones, FusionMode::hard_projection);
  CHECK((hard.alpha.array() == 1.0).all());
  CHECK((hard.mean - projected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("convexity bracketing of the denoised estimate") {
  Rng rng(5);
  const FrameConfig frame(6, 6, 2, 8000);
  KfHyperParams hp;
  hp.p0 = 0.2;
  KalmanState state(frame, hp);
  CMat mean(frame.M, frame.B), projected(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b)
    for (int f = 0; f < frame.M; ++f) {
      mean(f, b) = cplx(rng.normal(), rng.normal());
      projected(f, b) = cplx(rng.normal(), rng.normal());
    }
  state.set_mean(mean);
  Mat psi_m(frame.M, frame.B);
  for (int b = 0; b < frame.B; ++b)
    for (int f = 0; f < frame.M; ++f) psi_m(f, b) = std::abs(rng.normal());

  const DenoisedEstimate den =
      soft_combine(state, projected, psi_m, FusionMode::soft_combination);
  for (int b = 0; b < frame.B; ++b)
    for (int f = 0; f < frame.M; ++f) {
      const double alpha = den.alpha(f, b);
      CHECK(alpha >= 0.0);
      CHECK(alpha <= 1.0);
      const cplx convex =
          (1.0 - alpha) * mean(f, b) + alpha * projected(f, b);
      CHECK(std::abs(den.mean(f, b) - convex) < 1e-12);
    }
}

TEST_CASE("an infinite prior scale reproduces the baseline bit-for-bit") {
  Rng rng(6);
  const FrameConfig frame(8, 8, 2, 8000);
  KfHyperParams hp;
  hp.p0 = 0.1;
  KalmanState baseline(frame, hp);
  KalmanState fused(frame, hp);
  const TrainingSet training = random_training(2, 8, 12, rng);

  FusionConfig fusion;
  fusion.k_tau = 4;
  fusion.beta_pr = kInf;
  fusion.mode = FusionMode::soft_combination;
  fusion.metric = NnMetric::euclidean;

  SignalHistory history(frame);
  for (int blk = 0; blk < 20; ++blk) {
    Mat block(frame.R, frame.B);
    for (int b = 0; b < frame.B; ++b) block.col(b) = random_vec(frame.R, rng);
    history.push_block(block);
    const CMat spectra = spectra_of(history.window());
    const Vec mic = random_vec(frame.R, rng);

    const PriorError prior = prior_error(baseline, spectra, mic);
    track_noise_covariances(baseline, prior.e_plus);
    kf_update(baseline, spectra, prior.e_plus);

    asp_step(fused, fusion, training, spectra, mic);

    CHECK((fused.mean() - baseline.mean()).cwiseAbs().maxCoeff() == 0.0);
    for (int b = 0; b < frame.B; ++b)
      CHECK((fused.p_diag(b) - baseline.p_diag(b)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("hard projection with two training points lands on their line") {
  Rng rng(7);
  const FrameConfig frame(6, 6, 1, 8000);
  KfHyperParams hp;
  hp.p0 = 0.1;
  KalmanState state(frame, hp);
  const TrainingSet training = random_training(1, 6, 2, rng);

  FusionConfig fusion;
  fusion.k_tau = 2;
  fusion.metric = NnMetric::euclidean;
  fusion.mode = FusionMode::hard_projection;

  SignalHistory history(frame);
  history.push_block(random_vec(frame.R, rng));
  const AspStep step = asp_step(state, fusion, training,
                                spectra_of(history.window()),
                                random_vec(frame.R, rng));

  const AffineSubspace line = build_knn_subspace(training.vectors());
  const Vec estimate = state.time_domain_stacked();
  CHECK((line.project(estimate) - estimate).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((step.denoised.mean - state.mean()).cwiseAbs().maxCoeff() == 0.0);

  // hard projection keeps the tail-zero constraint
  const Vec time = idft_real(state.mean().col(0));
  CHECK(time.tail(frame.R).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + time.norm()));
}

TEST_CASE("small end-to-end run beats the offset-only model") {
  Rng rng(8);
  const FrameConfig frame(8, 8, 1, 8000);

  // corpus clustered around a true filter so the neighbourhood is informative
  const Vec truth = random_vec(frame.L, rng);
  Mat corpus_vectors(frame.L, 20);
  for (int j = 0; j < 20; ++j)
    corpus_vectors.col(j) = truth + 0.3 * random_vec(frame.L, rng);
  const TrainingSet training(corpus_vectors, 1, frame.L, 8000, 1);

  KfHyperParams hp;
  hp.p0 = 0.1;
  KalmanState state(frame, hp);
  FusionConfig fusion;
  fusion.k_tau = 6;
  fusion.metric = NnMetric::euclidean;
  fusion.mode = FusionMode::hard_projection;

  const int blocks = 50;
  const Vec excitation = random_vec(blocks * frame.R, rng);
  const Vec mic = direct_convolve(excitation, truth, blocks * frame.R);

  SignalHistory history(frame);
  SubspaceCache cache;
  for (int blk = 0; blk < blocks; ++blk) {
    history.push_block(excitation.segment(blk * frame.R, frame.R));
    asp_step(state, fusion, training, spectra_of(history.window()),
             mic.segment(blk * frame.R, frame.R), &cache);
  }

  Mat truth_mat(frame.L, 1);
  truth_mat.col(0) = truth;
  const double fused_mismatch =
      system_mismatch(truth_mat, state.time_domain_channels());

  // offset-only (D = 0) reference: the mean of the same final neighbourhood
  const auto neighbours = knn_select_euclidean(state.time_domain_stacked(),
                                               training.vectors(), fusion.k_tau);
  Mat members(frame.L, fusion.k_tau);
  for (int i = 0; i < fusion.k_tau; ++i)
    members.col(i) = training.vectors().col(neighbours[i]);
  Mat offset_mat(frame.L, 1);
  offset_mat.col(0) = fit_offset(members);
  const double offset_mismatch = system_mismatch(truth_mat, offset_mat);

  CHECK(fused_mismatch <= offset_mismatch);
}

TEST_CASE("asp_step validates its inputs") {
  Rng rng(9);
  const FrameConfig frame(4, 4, 1, 8000);
  KalmanState state(frame, KfHyperParams{});
  const TrainingSet training = random_training(1, 4, 3, rng);
  SignalHistory history(frame);
  history.push_block(random_vec(frame.R, rng));
  const CMat spectra = spectra_of(history.window());

  FusionConfig too_many;
  too_many.k_tau = 10;
  CHECK_THROWS_AS(
      asp_step(state, too_many, training, spectra, random_vec(frame.R, rng)),
      std::invalid_argument);

  FusionConfig bad;
  bad.k_tau = 1;
  CHECK_THROWS_AS(
      asp_step(state, bad, training, spectra, random_vec(frame.R, rng)),
      std::invalid_argument);
}
