#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace codeaug {

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Throws DegenerateDenominator when tp+fp or tp+fn is zero.
Prf precision_recall_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct RankedRetrieval {
  std::string query;
  std::vector<std::string> ranked;  // best first
  std::set<std::string> relevant;
};

/// Orders candidate ids by descending score, then ascending id.
std::vector<std::string> rank_candidates(std::vector<std::pair<std::string, double>> scored);

/// Mean of precision@rank over the ranks of relevant hits; the relevant set
/// size is the denominator, so relevant ids missing from the ranking count
/// as misses.
double average_precision(const RankedRetrieval& run);

/// Fraction of the top R that are relevant, R = |relevant|.
double precision_at_r(const RankedRetrieval& run);

struct MapResult {
  double value = 0;
  int n_queries = 0;  // queries that contributed
  int skipped = 0;    // queries without relevant candidates
};

/// Queries without relevant candidates are skipped and counted.
MapResult mean_average_precision(const std::vector<RankedRetrieval>& runs);

/// Reciprocal rank of the first hit, 0 when nothing relevant is ranked.
double mean_reciprocal_rank(const std::vector<RankedRetrieval>& runs);

struct RetrievalResult {
  double map = 0;
  double precision = 0;  // mean precision@R
  double mrr = 0;
  int n_queries = 0;
  int skipped = 0;
  bool degenerate = false;  // every pairwise score equal: ranking is pure id order
};

/// Leave-query-out retrieval over one pool: each item queries all others by
/// dot-product similarity of `embeddings`; relevant means same label.
RetrievalResult retrieval_eval(const std::vector<std::string>& ids, const std::vector<int>& labels,
                               const std::vector<std::vector<double>>& embeddings);

/// Same, with an arbitrary similarity function over pool indices.
template <typename Sim>
RetrievalResult retrieval_eval_with(const std::vector<std::string>& ids, const std::vector<int>& labels, Sim sim);

/// CSV rows `metric,value,n_queries,seed`.
std::string retrieval_csv(const RetrievalResult& r, std::uint64_t seed, bool header = true);

std::string format_double(double v);

}  // namespace codeaug

#include "codeaug/metrics/metrics_impl.hpp"
