// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "airkf/config.hpp"
#include "airkf/experiment.hpp"
#include "airkf/parallel.hpp"
#include "airkf/rir.hpp"

namespace {

using namespace airkf;

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    dims.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (dims.empty()) throw std::invalid_argument("--dims: empty list");
  return dims;
}

ExperimentConfig load_with_overrides(const std::string& config_path,
                                     std::optional<std::uint64_t> seed) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.seed = *seed;
  return config;
}

int cmd_gen_rirs(const std::string& config_path,
                 std::optional<std::uint64_t> seed, const std::string& out,
                 int threads, int count_override) {
  ExperimentConfig config = load_with_overrides(config_path, seed);
  const int count = count_override > 0 ? count_override : config.corpus_k;
  const std::string path = out.empty() ? config.corpus_path : out;
  std::printf("generating %d AIRs (B=%d, L=%d, W=%d, fs=%d) ...\n", count,
              config.frame.B, config.frame.L, config.room.w_len, config.frame.fs);
  const std::uint64_t corpus_seed =
      derive_seed(config.seed, SeedStream::corpus, 0);
  TrainingSet corpus = generate_corpus(config.room, config.geometry,
                                       config.frame.L, count, corpus_seed,
                                       threads);
  corpus.save(path);
  std::printf("wrote %s (K=%d, Q=%d)\n", path.c_str(), corpus.k(), corpus.q());
  return 0;
}

int cmd_analyze(const std::string& config_path, std::optional<std::uint64_t> seed,
                const std::string& out, int threads, const std::string& model,
                const std::string& dims_text, int clusters, int k_tau,
                int test_count) {
  ExperimentConfig config = load_with_overrides(config_path, seed);
  TrainingSet corpus = TrainingSet::load(config.corpus_path);
  corpus.require_compatible(config.frame);

  AnalysisOptions options;
  if (model == "global") options.model = SubspaceModelKind::global;
  else if (model == "mixture") options.model = SubspaceModelKind::mixture;
  else if (model == "knn") options.model = SubspaceModelKind::knn;
  else throw std::invalid_argument("--model must be global, mixture or knn");
  options.dims = parse_dims(dims_text);
  options.clusters = clusters;
  options.k_tau = k_tau;

  const std::uint64_t test_seed = derive_seed(config.seed, SeedStream::test_airs, 1);
  const auto tests = generate_air_samples(config.room, config.geometry,
                                          test_count, test_seed, threads);
  const auto rows = analyze_subspace(corpus, tests, options, config.seed);
  std::printf("%-10s %6s %14s\n", "model", "dim", "mismatch_db");
  for (const auto& row : rows) {
    if (row.skipped)
      std::printf("%-10s %6d %14s\n", row.model.c_str(), row.dim, "(skipped)");
    else
      std::printf("%-10s %6d %14.3f\n", row.model.c_str(), row.dim,
                  row.mean_mismatch_db);
  }
  if (!out.empty()) {
    write_analysis_csv(rows, out);
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out, int threads) {
  ExperimentConfig config = load_with_overrides(config_path, seed);
  TrainingSet corpus = TrainingSet::load(config.corpus_path);
  const ExperimentResult result = run_experiment(config, corpus, threads);
  write_experiment_outputs(config, result, out);
  for (const auto& variant : result.variants) {
    const auto& curve = variant.mean_curves.mismatch_db;
    std::printf("%-22s final mismatch %8.2f dB, final erle %8.2f dB\n",
                variant.spec.resolved_label().c_str(),
                curve[curve.size() - 1],
                variant.mean_curves.erle_db[curve.size() - 1]);
  }
  std::printf("outputs in %s\n", out.c_str());
  return 0;
}

int cmd_inspect(const std::string& corpus_path) {
  TrainingSet corpus = TrainingSet::load(corpus_path);
  std::printf("corpus      %s\n", corpus_path.c_str());
  std::printf("samples K   %d\n", corpus.k());
  std::printf("channels B  %d\n", corpus.channels());
  std::printf("taps L      %d\n", corpus.taps());
  std::printf("fs          %d\n", corpus.sample_rate());
  std::printf("seed        %llu\n",
              static_cast<unsigned long long>(corpus.seed()));
  const Vec norms = corpus.vectors().colwise().norm();
  std::printf("vector norm min/mean/max  %.4g / %.4g / %.4g\n",
              norms.minCoeff(), norms.mean(), norms.maxCoeff());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online MISO acoustic system identification harness"};
  app.require_subcommand(1);

  std::string config_path, out, corpus_path;
  std::string model = "knn", dims_text = "0";
  std::optional<std::uint64_t> seed;
  int threads = default_threads();
  int clusters = 40, k_tau = 0, test_count = 100, count_override = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "experiment config (JSON)")
          ->required();
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--threads", threads, "worker threads");
  };

  CLI::App* gen = app.add_subcommand("gen-rirs", "generate a training corpus");
  add_common(gen, true);
  gen->add_option("--out", out, "corpus output path (default: config corpus.path)");
  gen->add_option("--count", count_override, "override corpus.k");

  CLI::App* analyze =
      app.add_subcommand("analyze-subspace", "projection mismatch analysis");
  add_common(analyze, true);
  analyze->add_option("--model", model, "global | mixture | knn");
  analyze->add_option("--dims", dims_text, "comma-separated subspace dimensions");
  analyze->add_option("--clusters", clusters, "mixture cluster count");
  analyze->add_option("--ktau", k_tau, "fixed neighbour count (0: D+1)");
  analyze->add_option("--tests", test_count, "number of test AIRs");
  analyze->add_option("--out", out, "CSV output path");

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run, true);
  run->add_option("--out", out, "output directory")->required();

  CLI::App* inspect = app.add_subcommand("inspect", "dump corpus stats");
  inspect->add_option("--corpus", corpus_path, "corpus path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_rirs(config_path, seed, out, threads, count_override);
    if (analyze->parsed())
      return cmd_analyze(config_path, seed, out, threads, model, dims_text,
                         clusters, k_tau, test_count);
    if (run->parsed()) return cmd_run(config_path, seed, out, threads);
    if (inspect->parsed()) return cmd_inspect(corpus_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
