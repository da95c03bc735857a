// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "airkf/metrics.hpp"
#include "airkf/scenario.hpp"
#include "airkf/training_set.hpp"

namespace airkf {

struct VariantResult {
  VariantSpec spec;
  std::vector<TrialLog> logs;
  AggregateCurves mean_curves;
};

struct ExperimentResult {
  std::vector<VariantResult> variants;
  Vec block_time_s;
};

// Runs every variant over `trials` independent scenarios. Trials may execute
// in parallel; each trial is computed single-threaded and joined in trial
// order, so results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const TrainingSet& training, int threads = 1);

// One CSV per variant (schema: variant,trial_agg,block,time_s,mismatch_db,
// erle_db) plus a manifest.json capturing the resolved config.
void write_experiment_outputs(const ExperimentConfig& config,
                              const ExperimentResult& result,
                              const std::filesystem::path& out_dir);

enum class SubspaceModelKind { global, mixture, knn };

struct AnalysisOptions {
  SubspaceModelKind model = SubspaceModelKind::knn;
  int clusters = 40;       // mixture only
  int k_tau = 0;           // knn only; 0 selects K_tau = D + 1 per dimension
  std::vector<int> dims;   // subspace dimensions to evaluate
};

struct AnalysisRow {
  std::string model;
  int dim = 0;
  double mean_mismatch_db = 0.0;
  bool skipped = false;
};

// Projects ground-truth test AIRs (truncated to L taps) onto the selected
// subspace model family and reports the average mismatch per dimension,
// including the truncation-only baseline row. Mixture rows use oracle
// best-mismatch cluster selection.
std::vector<AnalysisRow> analyze_subspace(const TrainingSet& training,
                                          const std::vector<AirSample>& tests,
                                          const AnalysisOptions& options,
                                          std::uint64_t seed);

void write_analysis_csv(const std::vector<AnalysisRow>& rows,
                        const std::filesystem::path& path);

}  // namespace airkf
