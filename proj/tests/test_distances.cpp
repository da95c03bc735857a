#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "airkf/dft.hpp"
#include "airkf/distances.hpp"
#include "airkf/rng.hpp"

using namespace airkf;

namespace {

Vec random_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Stacked per-channel embedding of a time-domain MISO vector.
CVec embed_stacked(const Vec& air, int channels, int taps, int dft_len) {
  CVec out(static_cast<Eigen::Index>(channels) * dft_len);
  for (int b = 0; b < channels; ++b)
    out.segment(static_cast<Eigen::Index>(b) * dft_len, dft_len) =
        embed_filter(air.segment(static_cast<Eigen::Index>(b) * taps, taps),
                     dft_len);
  return out;
}

}  // namespace

TEST_CASE("euclidean distance basics and oracle") {
  Rng rng(1);
  const Vec a = random_vec(16, rng);
  CHECK(distance_euclidean(a, a) == 0.0);

  Vec d1 = Vec::Zero(16), d2 = Vec::Zero(16);
  d1[0] = 1.0;
  d2[0] = -1.0;
  CHECK(distance_euclidean(d1, d2) == doctest::Approx(4.0));

  const Vec b = random_vec(16, rng);
  double expected = 0.0;
  for (int i = 0; i < 16; ++i) expected += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(distance_euclidean(a, b) == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(distance_euclidean(a, random_vec(8, rng)),
                  std::invalid_argument);
}

TEST_CASE("kf distance with unit uncertainty is Parseval-scaled euclidean") {
  Rng rng(2);
  const int channels = 2, taps = 6, dft_len = 16;
  const Vec a = random_vec(channels * taps, rng);
  const Vec b = random_vec(channels * taps, rng);
  const CVec atf_a = embed_stacked(a, channels, taps, dft_len);
  const CVec atf_b = embed_stacked(b, channels, taps, dft_len);
  const Vec unit = Vec::Ones(channels * dft_len);

  CHECK(distance_kf(atf_a, atf_a, unit) == doctest::Approx(0.0));
  const double expected = dft_len * distance_euclidean(a, b);
  CHECK(distance_kf(atf_a, atf_b, unit) ==
        doctest::Approx(expected).epsilon(1e-9));

  // homogeneity: scaling the uncertainty divides the distance
  const Vec scaled = 4.0 * unit;
  CHECK(distance_kf(atf_a, atf_b, scaled) ==
        doctest::Approx(expected / 4.0).epsilon(1e-9));
}

TEST_CASE("knn_select ties, bounds and full selection") {
  Mat vectors(2, 4);
  vectors << 0, 1, 1, 3, 0, 0, 0, 0;  // two duplicates at distance 1
  Vec query(2);
  query << 0, 0;
  const auto all = knn_select_euclidean(query, vectors, 4);
  CHECK(all == std::vector<int>{0, 1, 2, 3});
  const auto two = knn_select_euclidean(query, vectors, 2);
  CHECK(two == std::vector<int>{0, 1});  // tie between 1 and 2 -> lower index
  CHECK_THROWS_AS(knn_select_euclidean(query, vectors, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(knn_select_euclidean(query, vectors, 0),
                  std::invalid_argument);
}

TEST_CASE("knn_select matches a full-sort oracle") {
  Rng rng(3);
  const int q = 12, corpus = 60;
  Mat vectors(q, corpus);
  for (int j = 0; j < corpus; ++j) vectors.col(j) = random_vec(q, rng);
  const Vec query = random_vec(q, rng);

  std::vector<int> order(corpus);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = (vectors.col(a) - query).squaredNorm();
    const double db = (vectors.col(b) - query).squaredNorm();
    return da != db ? da < db : a < b;
  });
  const auto got = knn_select_euclidean(query, vectors, 5);
  for (int i = 0; i < 5; ++i) CHECK(got[i] == order[i]);

  // a query equal to a training member selects that member first
  const auto self = knn_select_euclidean(vectors.col(17), vectors, 1);
  CHECK(self[0] == 17);
}

TEST_CASE("unit-uncertainty kf ranking equals euclidean ranking") {
  Rng rng(4);
  const int channels = 2, taps = 5, dft_len = 12, corpus = 200;
  Mat vectors(channels * taps, corpus);
  CMat atfs(channels * dft_len, corpus);
  for (int j = 0; j < corpus; ++j) {
    vectors.col(j) = random_vec(channels * taps, rng);
    atfs.col(j) = embed_stacked(vectors.col(j), channels, taps, dft_len);
  }
  const Vec query = random_vec(channels * taps, rng);
  const CVec query_atf = embed_stacked(query, channels, taps, dft_len);
  const Vec unit = Vec::Ones(channels * dft_len);

  const auto by_euc = knn_select_euclidean(query, vectors, corpus);
  const auto by_kf = knn_select_kf(query_atf, atfs, unit, corpus);
  CHECK(by_euc == by_kf);
}

TEST_CASE("uncertainty floor keeps the distance finite") {
  Rng rng(5);
  const CVec a = embed_stacked(random_vec(4, rng), 1, 4, 8);
  const CVec b = embed_stacked(random_vec(4, rng), 1, 4, 8);
  const Vec zeros = Vec::Zero(8);
  const double d = distance_kf(a, b, zeros);
  CHECK(std::isfinite(d));
  CHECK(d > 0.0);
}
