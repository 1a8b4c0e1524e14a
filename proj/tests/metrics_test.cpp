#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "codeaug/errors.hpp"
#include "codeaug/metrics/metrics.hpp"
#include "codeaug/util/rng.hpp"

using namespace codeaug;

namespace {

// Oracles work from sorted hit positions instead of walking the ranking.
std::vector<std::size_t> hit_positions(const RankedRetrieval& r) {
  std::vector<std::size_t> pos;
  for (const auto& id : r.relevant) {
    auto it = std::find(r.ranked.begin(), r.ranked.end(), id);
    if (it != r.ranked.end()) pos.push_back(static_cast<std::size_t>(it - r.ranked.begin()) + 1);
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

double oracle_ap(const RankedRetrieval& r) {
  auto pos = hit_positions(r);
  double s = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) s += static_cast<double>(i + 1) / static_cast<double>(pos[i]);
  return s / static_cast<double>(r.relevant.size());
}

double oracle_rr(const RankedRetrieval& r) {
  auto pos = hit_positions(r);
  return pos.empty() ? 0.0 : 1.0 / static_cast<double>(pos.front());
}

double oracle_p_at_r(const RankedRetrieval& r) {
  std::size_t R = r.relevant.size();
  auto pos = hit_positions(r);
  return static_cast<double>(std::count_if(pos.begin(), pos.end(), [&](std::size_t p) { return p <= R; })) /
         static_cast<double>(R);
}

RankedRetrieval random_run(Rng& rng, int q) {
  RankedRetrieval r;
  r.query = "q" + std::to_string(q);
  int n = static_cast<int>(rng.range(1, 12));
  for (int i = 0; i < n; ++i) r.ranked.push_back("c" + std::to_string(i));
  rng.shuffle(r.ranked);
  int extra = static_cast<int>(rng.range(0, 2));  // relevant ids that were never ranked
  for (int i = 0; i < n; ++i) {
    if (rng.below(3) == 0) r.relevant.insert("c" + std::to_string(i));
  }
  for (int i = 0; i < extra; ++i) r.relevant.insert("missing" + std::to_string(i));
  return r;
}

}  // namespace

TEST(Prf, HandExample) {
  Prf p = precision_recall_f1(8, 2, 4);
  EXPECT_DOUBLE_EQ(p.precision, 0.8);
  EXPECT_DOUBLE_EQ(p.recall, 8.0 / 12.0);
  EXPECT_NEAR(p.f1, 16.0 / 22.0, 1e-12);
}

TEST(Prf, DegenerateDenominators) {
  EXPECT_THROW(precision_recall_f1(0, 0, 3), DegenerateDenominator);
  EXPECT_THROW(precision_recall_f1(0, 3, 0), DegenerateDenominator);
  Prf z = precision_recall_f1(0, 1, 1);
  EXPECT_EQ(z.f1, 0.0);
}

TEST(Prf, RandomAgainstOracle) {
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    std::int64_t tp = rng.range(0, 50), fp = rng.range(0, 50), fn = rng.range(0, 50);
    if (tp + fp == 0 || tp + fn == 0) continue;
    Prf p = precision_recall_f1(tp, fp, fn);
    double f1 = 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
    ASSERT_NEAR(p.f1, f1, 1e-9) << tp << " " << fp << " " << fn;
  }
}

TEST(Ranking, AveragePrecisionHandExample) {
  RankedRetrieval r{"q", {"a", "b", "c", "d", "e"}, {"a", "c", "e"}};
  EXPECT_NEAR(average_precision(r), (1.0 + 2.0 / 3 + 3.0 / 5) / 3, 1e-12);
  EXPECT_NEAR(precision_at_r(r), 2.0 / 3, 1e-12);
  EXPECT_NEAR(mean_reciprocal_rank({r}), 1.0, 1e-12);
}

TEST(Ranking, UnrankedRelevantCountsAsMiss) {
  RankedRetrieval r{"q", {"a", "b"}, {"b", "z"}};
  EXPECT_NEAR(average_precision(r), 0.5 / 2, 1e-12);
  EXPECT_NEAR(mean_reciprocal_rank({r}), 0.5, 1e-12);
}

TEST(Ranking, TiesBreakByAscendingId) {
  auto ranked = rank_candidates({{"b", 1.0}, {"a", 1.0}, {"c", 2.0}});
  EXPECT_EQ(ranked, (std::vector<std::string>{"c", "a", "b"}));
}

TEST(Ranking, SkippedQueriesAreCounted) {
  RankedRetrieval hit{"q1", {"a"}, {"a"}};
  RankedRetrieval none{"q2", {"a"}, {}};
  MapResult m = mean_average_precision({hit, none});
  EXPECT_EQ(m.n_queries, 1);
  EXPECT_EQ(m.skipped, 1);
  EXPECT_DOUBLE_EQ(m.value, 1.0);
  EXPECT_THROW(mean_average_precision({}), DataError);
  EXPECT_THROW(average_precision(none), DataError);
}

TEST(Ranking, RandomInstancesAgainstOracles) {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    std::vector<RankedRetrieval> runs;
    int nq = static_cast<int>(rng.range(1, 5));
    for (int q = 0; q < nq; ++q) runs.push_back(random_run(rng, q));
    double map_sum = 0, rr_sum = 0;
    int used = 0;
    for (const auto& r : runs) {
      rr_sum += oracle_rr(r);
      if (r.relevant.empty()) continue;
      ++used;
      map_sum += oracle_ap(r);
      ASSERT_NEAR(average_precision(r), oracle_ap(r), 1e-9);
      ASSERT_NEAR(precision_at_r(r), oracle_p_at_r(r), 1e-9);
    }
    MapResult m = mean_average_precision(runs);
    ASSERT_EQ(m.n_queries, used);
    ASSERT_NEAR(m.value, used ? map_sum / used : 0.0, 1e-9);
    ASSERT_NEAR(mean_reciprocal_rank(runs), rr_sum / nq, 1e-9);
  }
}

TEST(Ranking, BoundsAndPerfectRanking) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    RankedRetrieval r = random_run(rng, t);
    if (r.relevant.empty()) continue;
    double ap = average_precision(r);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
    // Moving every ranked relevant id to the front can only raise AP.
    RankedRetrieval best = r;
    std::stable_partition(best.ranked.begin(), best.ranked.end(),
                          [&](const std::string& id) { return r.relevant.count(id) > 0; });
    EXPECT_GE(average_precision(best) + 1e-12, ap);
  }
}

TEST(Retrieval, OneHotEmbeddingsArePerfect) {
  std::vector<std::string> ids = {"a", "b", "c", "d", "e", "f"};
  std::vector<int> labels = {0, 0, 1, 1, 2, 2};
  std::vector<std::vector<double>> emb;
  for (int l : labels) {
    std::vector<double> v(3, 0.0);
    v[l] = 1.0;
    emb.push_back(v);
  }
  RetrievalResult r = retrieval_eval(ids, labels, emb);
  EXPECT_DOUBLE_EQ(r.map, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.mrr, 1.0);
  EXPECT_EQ(r.n_queries, 6);
  EXPECT_FALSE(r.degenerate);
}

TEST(Retrieval, ConstantScoresAreFlagged) {
  std::vector<std::string> ids = {"a", "b", "c"};
  std::vector<int> labels = {0, 1, 0};
  std::vector<std::vector<double>> emb(3, std::vector<double>{1.0});
  RetrievalResult r = retrieval_eval(ids, labels, emb);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.skipped, 1);
}

TEST(Retrieval, RandomPoolAgainstPairwiseOracle) {
  Rng rng(77);
  const int n = 50;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<std::vector<double>> emb;
  for (int i = 0; i < n; ++i) {
    ids.push_back("s" + std::to_string(1000 + i));
    labels.push_back(static_cast<int>(rng.below(5)));
    // Coarse values force ties.
    emb.push_back({static_cast<double>(rng.range(-2, 2)), static_cast<double>(rng.range(-2, 2))});
  }
  auto sim = [&](int a, int b) { return emb[a][0] * emb[b][0] + emb[a][1] * emb[b][1]; };
  double ap_sum = 0, rr_sum = 0;
  int used = 0;
  for (int q = 0; q < n; ++q) {
    // Rank of c = 1 + number of candidates that beat it.
    std::vector<std::size_t> pos;
    for (int c = 0; c < n; ++c) {
      if (c == q || labels[c] != labels[q]) continue;
      std::size_t rank = 1;
      for (int o = 0; o < n; ++o) {
        if (o == q || o == c) continue;
        if (sim(q, o) > sim(q, c) || (sim(q, o) == sim(q, c) && ids[o] < ids[c])) ++rank;
      }
      pos.push_back(rank);
    }
    if (pos.empty()) continue;
    std::sort(pos.begin(), pos.end());
    ++used;
    double ap = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) ap += static_cast<double>(i + 1) / pos[i];
    ap_sum += ap / pos.size();
    rr_sum += 1.0 / pos.front();
  }
  RetrievalResult r = retrieval_eval(ids, labels, emb);
  EXPECT_EQ(r.n_queries, used);
  EXPECT_NEAR(r.map, ap_sum / used, 1e-9);
  EXPECT_NEAR(r.mrr, rr_sum / n, 1e-9);
}

TEST(Retrieval, CsvShape) {
  RetrievalResult r;
  r.map = 0.5;
  r.n_queries = 4;
  EXPECT_EQ(retrieval_csv(r, 3).substr(0, 46), "metric,value,n_queries,seed\nmap,0.5,4,3\nprecis");
}
