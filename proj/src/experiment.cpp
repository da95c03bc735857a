// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "airkf/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "airkf/config.hpp"
#include "airkf/dft.hpp"
#include "airkf/kmeans.hpp"
#include "airkf/parallel.hpp"

namespace airkf {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

TrialLog run_variant_on_scenario(const ExperimentConfig& config,
                                 const VariantSpec& variant,
                                 const TrainingSet& training,
                                 const Scenario& scenario, int trial_index) {
  const FrameConfig& frame = config.frame;
  const int blocks = config.num_blocks();

  KalmanState state(frame, variant.kf);
  SignalHistory history(frame);
  ErleEstimator erle(config.erle_lambda);
  SubspaceCache cache;

  TrialLog log;
  log.trial_seed = derive_seed(config.seed, SeedStream::test_airs, trial_index);
  log.mismatch_db.resize(blocks);
  log.erle_db.resize(blocks);
  log.block_time_s.resize(blocks);

  CMat spectra(frame.M, frame.B);
  for (int blk = 0; blk < blocks; ++blk) {
    const Eigen::Index start = static_cast<Eigen::Index>(blk) * frame.R;
    history.push_block(scenario.excitation.middleRows(start, frame.R));
    for (int b = 0; b < frame.B; ++b)
      spectra.col(b) = dft(history.window().col(b));
    const Vec d_block = scenario.clean_d.segment(start, frame.R);
    const Vec y_block = d_block + scenario.noise.segment(start, frame.R);

    Vec d_hat;
    if (variant.is_baseline()) {
      PriorError prior = prior_error(state, spectra, y_block);
      track_noise_covariances(state, prior.e_plus);
      kf_update(state, spectra, prior.e_plus);
      d_hat = std::move(prior.d_hat);
    } else {
      AspStep step =
          asp_step(state, variant.fusion, training, spectra, y_block, &cache);
      d_hat = std::move(step.d_hat);
    }

    log.mismatch_db[blk] = system_mismatch(scenario.ground_truth.channels,
                                           state.time_domain_channels());
    log.erle_db[blk] = erle.update(d_block, d_hat);
    log.block_time_s[blk] = static_cast<double>(blk + 1) * frame.R / frame.fs;
  }
  return log;
}

AffineSubspace knn_subspace_for_query(const TrainingSet& training,
                                      const Vec& query, int k_tau) {
  const auto neighbours =
      knn_select_euclidean(query, training.vectors(), k_tau);
  Mat members(training.q(), k_tau);
  for (int i = 0; i < k_tau; ++i)
    members.col(i) = training.vectors().col(neighbours[i]);
  return build_knn_subspace(members);
}

double projected_mismatch(const AirSample& truth, const Vec& projected,
                          int taps, int channels) {
  Mat estimate(taps, channels);
  for (int b = 0; b < channels; ++b)
    estimate.col(b) = projected.segment(static_cast<Eigen::Index>(b) * taps, taps);
  return system_mismatch(truth.channels, estimate);
}

Vec truncated_stacked(const AirSample& truth, int taps, int channels) {
  Vec out(static_cast<Eigen::Index>(taps) * channels);
  for (int b = 0; b < channels; ++b)
    out.segment(static_cast<Eigen::Index>(b) * taps, taps) =
        truth.channels.col(b).head(taps);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const TrainingSet& training, int threads) {
  config.validate();
  training.require_compatible(config.frame);
  for (const auto& variant : config.variants)
    if (!variant.is_baseline() && variant.fusion.k_tau > training.k())
      throw std::invalid_argument("run_experiment: k_tau exceeds corpus size");

  const int blocks = config.num_blocks();
  const std::size_t variant_count = config.variants.size();
  std::vector<std::vector<TrialLog>> logs(variant_count);
  for (auto& per_variant : logs) per_variant.resize(config.trials);

  parallel_for(config.trials, threads, [&](std::size_t trial) {
    const Scenario scenario =
        synthesize_scenario(config, static_cast<int>(trial));
    for (std::size_t v = 0; v < variant_count; ++v)
      logs[v][trial] = run_variant_on_scenario(
          config, config.variants[v], training, scenario, static_cast<int>(trial));
  });

  ExperimentResult result;
  result.block_time_s.resize(blocks);
  for (int blk = 0; blk < blocks; ++blk)
    result.block_time_s[blk] =
        static_cast<double>(blk + 1) * config.frame.R / config.frame.fs;
  for (std::size_t v = 0; v < variant_count; ++v) {
    VariantResult variant_result;
    variant_result.spec = config.variants[v];
    variant_result.mean_curves =
        aggregate_trials(logs[v], config.aggregate_linear);
    variant_result.logs = std::move(logs[v]);
    result.variants.push_back(std::move(variant_result));
  }
  return result;
}

void write_experiment_outputs(const ExperimentConfig& config,
                              const ExperimentResult& result,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& variant : result.variants) {
    const std::string label = variant.spec.resolved_label();
    std::ofstream csv(out_dir / (label + ".csv"));
    if (!csv) throw std::runtime_error("cannot write CSV in " + out_dir.string());
    csv << "variant,trial_agg,block,time_s,mismatch_db,erle_db\n";
    for (std::size_t trial = 0; trial < variant.logs.size(); ++trial) {
      const TrialLog& log = variant.logs[trial];
      for (Eigen::Index blk = 0; blk < log.mismatch_db.size(); ++blk)
        csv << label << ',' << trial << ',' << blk << ','
            << format_double(log.block_time_s[blk]) << ','
            << format_double(log.mismatch_db[blk]) << ','
            << format_double(log.erle_db[blk]) << '\n';
    }
    for (Eigen::Index blk = 0; blk < variant.mean_curves.mismatch_db.size(); ++blk)
      csv << label << ",mean," << blk << ','
          << format_double(result.block_time_s[blk]) << ','
          << format_double(variant.mean_curves.mismatch_db[blk]) << ','
          << format_double(variant.mean_curves.erle_db[blk]) << '\n';
  }
  std::ofstream manifest(out_dir / "manifest.json");
  manifest << "{\n  \"tool\": \"airkf 1.0.0\",\n  \"config\": "
           << config_to_json(config) << "\n}\n";
}

std::vector<AnalysisRow> analyze_subspace(const TrainingSet& training,
                                          const std::vector<AirSample>& tests,
                                          const AnalysisOptions& options,
                                          std::uint64_t seed) {
  if (tests.empty())
    throw std::invalid_argument("analyze_subspace: no test samples");
  const int taps = training.taps();
  const int channels = training.channels();
  const int q = training.q();
  const int corpus = training.k();

  std::vector<AnalysisRow> rows;

  // Truncation-only baseline: the best any L-tap representation can do.
  {
    double mean_db = 0.0;
    for (const auto& test : tests)
      mean_db += projected_mismatch(
          test, truncated_stacked(test, taps, channels), taps, channels);
    rows.push_back({"oracle_gt", 0, mean_db / tests.size(), false});
  }

  int max_dim = 0;
  for (int d : options.dims) max_dim = std::max(max_dim, d);

  if (options.model == SubspaceModelKind::global) {
    const Vec offset = fit_offset(training.vectors());
    const int capped = std::min({max_dim, q, corpus - 1});
    PcaResult pca;
    if (capped > 0) pca = fit_basis_pca(training.vectors(), offset, capped);
    for (int d : options.dims) {
      if (d > std::min(q, corpus - 1)) {
        rows.push_back({"global", d, 0.0, true});
        continue;
      }
      const AffineSubspace subspace = AffineSubspace::from_orthonormal(
          offset, d == 0 ? Mat(q, 0) : Mat(pca.basis.leftCols(d)));
      double mean_db = 0.0;
      for (const auto& test : tests)
        mean_db += projected_mismatch(
            test, subspace.project(truncated_stacked(test, taps, channels)),
            taps, channels);
      rows.push_back({"global", d, mean_db / tests.size(), false});
    }
  } else if (options.model == SubspaceModelKind::mixture) {
    for (int d : options.dims) {
      // Oracle selection: for each test, the cluster with the lowest
      // resulting mismatch. Per-cluster dimension is capped by membership.
      const MixtureModel model =
          fit_mixture(training.vectors(), options.clusters, d, seed);
      double mean_db = 0.0;
      for (const auto& test : tests) {
        const Vec query = truncated_stacked(test, taps, channels);
        double best = kDbCeiling;
        for (const auto& subspace : model.subspaces)
          best = std::min(best, projected_mismatch(test, subspace.project(query),
                                                   taps, channels));
        mean_db += best;
      }
      rows.push_back({"mixture", d, mean_db / tests.size(), false});
    }
  } else {
    for (int d : options.dims) {
      const int k_tau = options.k_tau > 0 ? options.k_tau : d + 1;
      if (k_tau > corpus) {
        rows.push_back({"knn", d, 0.0, true});
        continue;
      }
      double mean_db = 0.0;
      for (const auto& test : tests) {
        const Vec query = truncated_stacked(test, taps, channels);
        const AffineSubspace subspace =
            knn_subspace_for_query(training, query, k_tau);
        mean_db +=
            projected_mismatch(test, subspace.project(query), taps, channels);
      }
      rows.push_back({"knn", d, mean_db / tests.size(), false});
    }
  }
  return rows;
}

void write_analysis_csv(const std::vector<AnalysisRow>& rows,
                        const std::filesystem::path& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot write " + path.string());
  csv << "model,dim,mismatch_db,skipped\n";
  for (const auto& row : rows)
    csv << row.model << ',' << row.dim << ','
        << format_double(row.mean_mismatch_db) << ',' << (row.skipped ? 1 : 0)
        << '\n';
}

}  // namespace airkf
