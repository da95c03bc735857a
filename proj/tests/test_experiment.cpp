#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "airkf/config.hpp"
#include "airkf/experiment.hpp"
#include "airkf/rng.hpp"

using namespace airkf;

namespace {

ExperimentConfig desk_config() {
  ExperimentConfig config;
  config.frame = FrameConfig(32, 32, 2, 8000);
  config.room.dimensions = Vec3(4.0, 3.0, 2.5);
  config.room.t60 = 0.15;
  config.room.fs = 8000;
  config.room.w_len = 64;
  config.geometry.loudspeaker_positions.resize(3, 2);
  config.geometry.loudspeaker_positions.col(0) = Vec3(1.9, 1.5, 1.2);
  config.geometry.loudspeaker_positions.col(1) = Vec3(2.1, 1.5, 1.2);
  config.geometry.array_center = Vec3(2.0, 1.5, 1.2);
  config.geometry.radius_range = {0.8, 1.0};
  config.geometry.azimuth_range_deg = {30.0, 150.0};
  config.geometry.elevation_range_deg = {-10.0, 30.0};
  config.corpus_path = "unused.airs";
  config.corpus_k = 30;
  config.trials = 2;
  config.duration_s = 2.0;
  config.seed = 99;
  VariantSpec baseline;
  baseline.name = "baseline_kf";
  config.variants.push_back(baseline);
  return config;
}

TrainingSet desk_corpus(const ExperimentConfig& config) {
  return generate_corpus(config.room, config.geometry, config.frame.L,
                         config.corpus_k,
                         derive_seed(config.seed, SeedStream::corpus, 0));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* kMinimalJson = R"json({
  "frame": {"L": 32, "R": 32, "B": 2, "fs": 8000},
  "room": {"dimensions": [4.0, 3.0, 2.5], "t60": 0.15, "w_len": 64},
  "geometry": {
    "loudspeaker_positions": [[1.9, 1.5, 1.2], [2.1, 1.5, 1.2]],
    "array_center": [2.0, 1.5, 1.2],
    "radius_range": [0.8, 1.0],
    "azimuth_range_deg": [30.0, 150.0],
    "elevation_range_deg": [-10.0, 30.0]
  },
  "corpus": {"path": "corpus.airs", "k": 30},
  "excitation": {"kind": "wgn"},
  "snr_wgn_db": 0.0,
  "snr_sp_db": "inf",
  "trials": 2,
  "duration_s": 1.0,
  "variants": [
    {"name": "baseline_kf"},
    {"name": "kfasp", "metric": "kf", "mode": "soft_combination", "k_tau": 5}
  ],
  "seed": 7
})json";

}  // namespace

TEST_CASE("baseline mismatch decreases in windowed medians") {
  ExperimentConfig config = desk_config();
  const TrainingSet corpus = desk_corpus(config);
  const ExperimentResult result = run_experiment(config, corpus);
  const Vec& curve = result.variants[0].mean_curves.mismatch_db;

  std::vector<double> medians;
  for (int start = 0; start + 20 <= curve.size(); start += 20) {
    std::vector<double> window(curve.data() + start, curve.data() + start + 20);
    std::nth_element(window.begin(), window.begin() + 10, window.end());
    medians.push_back(window[10]);
  }
  CHECK(medians.size() >= 2);
  for (std::size_t i = 1; i < medians.size(); ++i)
    CHECK(medians[i] <= medians[i - 1] + 0.2);
  CHECK(medians.back() < medians.front());
}

TEST_CASE("a fusion-disabled variant reproduces the baseline exactly") {
  ExperimentConfig config = desk_config();
  VariantSpec disabled;
  disabled.name = "kfasp";
  disabled.label = "kfasp_disabled";
  disabled.fusion.beta_pr = std::numeric_limits<double>::infinity();
  disabled.fusion.metric = NnMetric::euclidean;
  disabled.fusion.k_tau = 5;
  disabled.fusion.p0 = 0.01;
  disabled.kf.p0 = 0.01;
  config.variants.push_back(disabled);
  config.trials = 1;

  const TrainingSet corpus = desk_corpus(config);
  const ExperimentResult result = run_experiment(config, corpus);
  const TrialLog& a = result.variants[0].logs[0];
  const TrialLog& b = result.variants[1].logs[0];
  CHECK((a.mismatch_db - b.mismatch_db).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.erle_db - b.erle_db).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("experiment outputs are byte-identical across reruns and threads") {
  ExperimentConfig config = desk_config();
  config.duration_s = 1.0;
  VariantSpec fused;
  fused.name = "kfasp";
  fused.fusion.k_tau = 5;
  fused.kf.p0 = fused.fusion.p0;
  config.variants.push_back(fused);
  const TrainingSet corpus = desk_corpus(config);

  const auto base = std::filesystem::temp_directory_path();
  const auto dir1 = base / "airkf_run1";
  const auto dir2 = base / "airkf_run2";
  const auto dir3 = base / "airkf_run3";
  write_experiment_outputs(config, run_experiment(config, corpus, 1), dir1);
  write_experiment_outputs(config, run_experiment(config, corpus, 1), dir2);
  write_experiment_outputs(config, run_experiment(config, corpus, 4), dir3);

  for (const char* name : {"baseline_kf.csv", "kfasp_dkf_comb.csv",
                           "manifest.json"}) {
    const std::string bytes1 = slurp(dir1 / name);
    CHECK(!bytes1.empty());
    CHECK(bytes1 == slurp(dir2 / name));
    CHECK(bytes1 == slurp(dir3 / name));
  }
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  std::filesystem::remove_all(dir3);
}

TEST_CASE("csv schema") {
  ExperimentConfig config = desk_config();
  config.duration_s = 0.5;
  config.trials = 1;
  const TrainingSet corpus = desk_corpus(config);
  const auto dir = std::filesystem::temp_directory_path() / "airkf_schema";
  write_experiment_outputs(config, run_experiment(config, corpus), dir);
  std::ifstream csv(dir / "baseline_kf.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "variant,trial_agg,block,time_s,mismatch_db,erle_db");
  std::string first;
  std::getline(csv, first);
  CHECK(first.substr(0, 14) == "baseline_kf,0,");
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing accepts the documented schema") {
  const ExperimentConfig config = parse_config(kMinimalJson);
  CHECK(config.frame.M == 64);
  CHECK(config.corpus_k == 30);
  CHECK(std::isinf(config.snr_sp_db));
  CHECK(config.variants.size() == 2);
  CHECK(config.variants[1].fusion.k_tau == 5);
  CHECK(config.variants[1].kf.p0 == doctest::Approx(0.1));  // asp default
  CHECK(config.variants[0].kf.p0 == doctest::Approx(0.01));

  // round trip through the manifest serialization
  const ExperimentConfig again = parse_config(config_to_json(config));
  CHECK(again.frame.L == config.frame.L);
  CHECK(again.seed == config.seed);
  CHECK(again.variants.size() == config.variants.size());
  CHECK(config_to_json(again) == config_to_json(config));
}

TEST_CASE("unknown config keys are rejected") {
  std::string with_typo = kMinimalJson;
  const auto pos = with_typo.find("\"trials\"");
  with_typo.insert(pos, "\"trails\": 3, ");
  CHECK_THROWS_AS(parse_config(with_typo), std::invalid_argument);

  std::string bad_variant = kMinimalJson;
  const auto vpos = bad_variant.find("\"metric\"");
  bad_variant.insert(vpos, "\"metrc\": \"kf\", ");
  CHECK_THROWS_AS(parse_config(bad_variant), std::invalid_argument);
}

TEST_CASE("subspace analysis rows and anchors") {
  Rng rng(5);
  const int taps = 16, count = 30, w = 24;
  Mat vectors(taps, count);
  for (int j = 0; j < count; ++j)
    for (int i = 0; i < taps; ++i) vectors(i, j) = rng.normal();
  const TrainingSet corpus(vectors, 1, taps, 8000, 3);

  std::vector<AirSample> tests(6);
  for (auto& test : tests) {
    test.channels.resize(w, 1);
    for (int i = 0; i < w; ++i) test.channels(i, 0) = rng.normal();
  }

  AnalysisOptions global;
  global.model = SubspaceModelKind::global;
  global.dims = {0, 8, 16};
  const auto rows = analyze_subspace(corpus, tests, global, 1);
  CHECK(rows.front().model == "oracle_gt");
  // full-dimension projection reproduces the truncated truth
  const double oracle_db = rows.front().mean_mismatch_db;
  const auto& full = rows.back();
  CHECK(full.dim == 16);
  CHECK(full.mean_mismatch_db == doctest::Approx(oracle_db).epsilon(1e-6));

  // knn with k_tau = 1 reproduces the nearest-neighbour baseline
  AnalysisOptions nn;
  nn.model = SubspaceModelKind::knn;
  nn.k_tau = 1;
  nn.dims = {0};
  const auto nn_rows = analyze_subspace(corpus, tests, nn, 1);
  double expected = 0.0;
  for (const auto& test : tests) {
    Vec query = test.channels.col(0).head(taps);
    int best = 0;
    double best_d = (vectors.col(0) - query).squaredNorm();
    for (int j = 1; j < count; ++j) {
      const double d = (vectors.col(j) - query).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    Mat estimate(taps, 1);
    estimate.col(0) = vectors.col(best);
    expected += system_mismatch(test.channels, estimate);
  }
  expected /= tests.size();
  CHECK(nn_rows.back().mean_mismatch_db ==
        doctest::Approx(expected).epsilon(1e-12));

  // mixture rows exist for every requested dimension
  AnalysisOptions mixture;
  mixture.model = SubspaceModelKind::mixture;
  mixture.clusters = 4;
  mixture.dims = {0, 2, 4};
  const auto mix_rows = analyze_subspace(corpus, tests, mixture, 1);
  CHECK(mix_rows.size() == 4);  // oracle row + 3 dims
  for (std::size_t i = 1; i < mix_rows.size(); ++i)
    CHECK_FALSE(mix_rows[i].skipped);
}

TEST_CASE("analysis csv") {
  std::vector<AnalysisRow> rows = {{"oracle_gt", 0, -12.5, false},
                                   {"knn", 4, -10.25, false}};
  const auto path =
      std::filesystem::temp_directory_path() / "airkf_analysis.csv";
  write_analysis_csv(rows, path);
  CHECK(slurp(path) ==
        "model,dim,mismatch_db,skipped\noracle_gt,0,-12.5,0\nknn,4,-10.25,0\n");
  std::filesystem::remove(path);
}
