#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "msbench/metrics/retrieval.hpp"
#include "msbench/metrics/spectrum_metrics.hpp"
#include "msbench/rng.hpp"

namespace {

using namespace msbench::metrics;
using Vec = std::vector<double>;

// Textbook form: 1/2 KL(p||m) + 1/2 KL(q||m), m = (p+q)/2, base 2.
double js_divergence_oracle(Vec p, Vec q) {
  double sp = 0, sq = 0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  double kl_p = 0, kl_q = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i] / sp, b = q[i] / sq, m = (a + b) / 2;
    if (a > 0) kl_p += a * std::log2(a / m);
    if (b > 0) kl_q += b * std::log2(b / m);
  }
  return 0.5 * (kl_p + kl_q);
}

Vec random_vector(msbench::Rng& rng, std::size_t n, double density) {
  Vec v(n, 0.0);
  for (auto& x : v) {
    if (rng.uniform01() < density) x = rng.uniform01() * 5;
  }
  return v;
}

TEST(Cosine, Examples) {
  const Vec v = {0.3, 1.2, 0.0, 4.0};
  EXPECT_NEAR(cosine_similarity(v, v), 1.0, 1e-15);
  EXPECT_EQ(cosine_similarity(Vec{1, 0}, Vec{0, 1}), 0.0);
  EXPECT_NEAR(cosine_similarity(Vec{1, 1, 0}, Vec{1, 0, 0}), 1 / std::sqrt(2.0), 1e-15);
  std::vector<std::string> notes;
  EXPECT_EQ(cosine_similarity(Vec{0, 0}, Vec{0, 0}, &notes), 0.0);
  EXPECT_EQ(notes.size(), 1U);
  EXPECT_THROW(cosine_similarity(Vec{1}, Vec{1, 2}), msbench::UsageError);
}

TEST(JsSimilarity, Examples) {
  EXPECT_NEAR(js_similarity(Vec{1, 2, 3}, Vec{1, 2, 3}), 1.0, 1e-15);
  EXPECT_EQ(js_similarity(Vec{1, 0}, Vec{0, 1}), 0.0);
  EXPECT_NEAR(js_similarity(Vec{0.5, 0.5}, Vec{1, 0}), 1 - js_divergence_oracle({0.5, 0.5}, {1, 0}), 1e-15);
  EXPECT_NEAR(js_similarity(Vec{0.5, 0.5}, Vec{1, 0}), 0.68872187554086717, 1e-12);
  EXPECT_THROW(js_similarity(Vec{0, 0}, Vec{1, 0}), msbench::DomainError);
}

TEST(JsSimilarity, MatchesOracleSymmetricAndBounded) {
  msbench::Rng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    Vec p = random_vector(rng, 40, 0.3), q = random_vector(rng, 40, 0.3);
    p[rng.uniform_index(40)] += 1;
    q[rng.uniform_index(40)] += 1;
    const double s = js_similarity(p, q);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    EXPECT_NEAR(s, 1 - js_divergence_oracle(p, q), 1e-12);
    EXPECT_EQ(s, js_similarity(q, p));
  }
}

TEST(Metrics, ScaleInvarianceOnNormalizedInputs) {
  msbench::Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Vec p = random_vector(rng, 30, 0.5), q = random_vector(rng, 30, 0.5);
    p[0] += 1;
    q[1] += 1;
    const double c = 0.001 + rng.uniform01() * 1000;
    Vec scaled = p;
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(cosine_similarity(scaled, q), cosine_similarity(p, q), 1e-12);
    EXPECT_NEAR(js_similarity(scaled, q), js_similarity(p, q), 1e-12);
    EXPECT_NEAR(cosine_similarity(p, q), cosine_similarity(q, p), 1e-15);
    const double cs = cosine_similarity(p, q);
    EXPECT_GE(cs, 0.0);
    EXPECT_LE(cs, 1.0);
  }
}

TEST(Metrics, IdenticalInputsGiveExactlyOne) {
  msbench::Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec v = random_vector(rng, 200, 0.2);
    v[rng.uniform_index(200)] += 0.5;
    const auto s = score_spectrum(v, v);
    ASSERT_EQ(s.cosine, 1.0);
    ASSERT_EQ(*s.js_similarity, 1.0);
    ASSERT_EQ(*s.coverage, 1.0);
  }
}

TEST(Coverage, Examples) {
  Vec truth(100, 0.0), pred(100, 0.0);
  truth[10] = 1.0;
  truth[50] = 0.5;
  pred[10] = 3.0;
  pred[90] = 2.0;
  EXPECT_EQ(spectral_coverage(truth, truth), 1.0);
  EXPECT_EQ(spectral_coverage(pred, truth), 0.5);
  Vec three(10, 0.0);
  three[1] = three[2] = three[3] = 1.0;
  EXPECT_EQ(spectral_coverage(Vec(10, 0.0), three), 0.0);
  EXPECT_FALSE(spectral_coverage(three, Vec(10, 0.0)).has_value());
}

TEST(Coverage, ThresholdIsStrictOnMaxNormalizedIntensity) {
  const Vec truth = {100, 1, 0.5};  // normalised: 1, 0.01, 0.005
  EXPECT_EQ(spectral_coverage(truth, truth, 0.01), 1.0);
  const Vec pred = {100, 0, 0};
  EXPECT_EQ(spectral_coverage(pred, truth, 0.01), 1.0);   // only bin 0 counts
  EXPECT_EQ(spectral_coverage(pred, truth, 0.001), 1.0 / 3.0);
  EXPECT_THROW(spectral_coverage(pred, truth, 1.0), msbench::UsageError);
}

TEST(ScoreSpectrum, UsesLog1pForSimilarityAndRawForCoverage) {
  const Vec truth = {0, 9, 0, 1};
  const Vec pred = {0, 1, 0, 9};
  const auto s = score_spectrum(pred, truth);
  const Vec lt = {0, std::log1p(9.0), 0, std::log1p(1.0)};
  const Vec lp = {0, std::log1p(1.0), 0, std::log1p(9.0)};
  EXPECT_DOUBLE_EQ(s.cosine, cosine_similarity(lp, lt));
  EXPECT_DOUBLE_EQ(*s.js_similarity, js_similarity(lp, lt));
  EXPECT_EQ(*s.coverage, 1.0);
  std::vector<std::string> notes;
  const auto empty = score_spectrum(Vec(4, 0.0), truth, kDefaultTau, &notes);
  EXPECT_EQ(empty.cosine, 0.0);
  EXPECT_FALSE(empty.js_similarity.has_value());
  EXPECT_EQ(*empty.coverage, 0.0);
  EXPECT_FALSE(notes.empty());
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank_candidates({{"a", 0.9}, {"b", 0.5}, {"c", 0.1}}, "a").rank, 0U);
  EXPECT_EQ(rank_candidates({{"a", 0.9}, {"b", 0.9}, {"c", 0.9}, {"d", 0.1}}, "a").rank, 2U);
  const auto last = rank_candidates({{"a", 0.9}, {"b", 0.5}, {"c", 0.3}, {"t", 0.1}}, "t");
  EXPECT_EQ(last.rank, 3U);
  EXPECT_EQ(last.normalized_rank, 0.75);
  EXPECT_THROW(rank_candidates({{"a", 1}}, "z"), msbench::DataError);
  EXPECT_THROW(rank_candidates({{"a", 1}, {"a", 2}}, "a"), msbench::DataError);
  EXPECT_THROW(rank_candidates({}, "a"), msbench::UsageError);
}

TEST(Rank, BruteForceOracleOverAllOrderings) {
  msbench::Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    std::vector<ScoredCandidate> list;
    for (std::size_t i = 0; i < n; ++i) {
      // Few distinct scores so ties are common.
      list.push_back({"c" + std::to_string(i), static_cast<double>(rng.uniform_index(4)) / 4});
    }
    const std::string truth = "c" + std::to_string(rng.uniform_index(n));
    // Oracle: the worst position the true candidate takes over every ordering
    // sorted by descending score.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::size_t worst = 0;
    do {
      std::vector<ScoredCandidate> perm;
      for (auto i : order) perm.push_back(list[i]);
      std::stable_sort(perm.begin(), perm.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (perm[pos].id == truth) worst = std::max(worst, pos);
      }
      std::vector<ScoredCandidate> shuffled;
      for (auto i : order) shuffled.push_back(list[i]);
      ASSERT_EQ(rank_candidates(shuffled, truth).rank, rank_candidates(list, truth).rank);
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_EQ(rank_candidates(list, truth).rank, worst);
  }
}

TEST(TopK, Examples) {
  auto ranks = [](std::vector<std::size_t> r) {
    std::vector<RankResult> out;
    for (auto x : r) out.push_back({x, 10, x / 10.0});
    return out;
  };
  EXPECT_EQ(top_k(ranks({0, 0, 0}), 1), 1.0);
  EXPECT_DOUBLE_EQ(top_k(ranks({0, 4, 9}), 5), 2.0 / 3.0);
  std::vector<RankResult> normalized = {{1, 200, 0.005}, {4, 200, 0.02}};
  EXPECT_EQ(top_k_percent(normalized, 1), 0.5);
  EXPECT_THROW(top_k({}, 1), msbench::UsageError);
  EXPECT_THROW(top_k(ranks({0}), 0), msbench::UsageError);
  EXPECT_THROW(top_k_percent(normalized, 0), msbench::UsageError);
}

TEST(TopK, FullCandidateListAlwaysHits) {
  msbench::Rng rng(2);
  std::vector<RankResult> results;
  std::size_t max_total = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.uniform_index(50);
    std::vector<ScoredCandidate> list;
    for (std::size_t c = 0; c < n; ++c) list.push_back({std::to_string(c), rng.uniform01()});
    results.push_back(rank_candidates(list, std::to_string(rng.uniform_index(n))));
    max_total = std::max(max_total, n);
    EXPECT_EQ(top_k({results.back()}, n), 1.0);
  }
  EXPECT_EQ(top_k(results, max_total), 1.0);
  EXPECT_EQ(top_k_percent(results, 100), 1.0);
}

}  // namespace
