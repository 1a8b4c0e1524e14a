#pragma once

#include <cmath>

namespace codeaug {

template <typename Sim>
RetrievalResult retrieval_eval_with(const std::vector<std::string>& ids, const std::vector<int>& labels, Sim sim) {
  std::vector<RankedRetrieval> runs;
  runs.reserve(ids.size());
  bool all_equal = true;
  bool have_first = false;
  double first = 0;
  for (std::size_t q = 0; q < ids.size(); ++q) {
    RankedRetrieval run;
    run.query = ids[q];
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(ids.size());
    for (std::size_t c = 0; c < ids.size(); ++c) {
      if (c == q) continue;
      double s = sim(q, c);
      if (!have_first) {
        first = s;
        have_first = true;
      } else if (s != first) {
        all_equal = false;
      }
      scored.emplace_back(ids[c], s);
      if (labels[c] == labels[q]) run.relevant.insert(ids[c]);
    }
    run.ranked = rank_candidates(std::move(scored));
    runs.push_back(std::move(run));
  }
  RetrievalResult r;
  MapResult m = mean_average_precision(runs);
  r.map = m.value;
  r.n_queries = m.n_queries;
  r.skipped = m.skipped;
  double prec = 0;
  for (const auto& run : runs) {
    if (!run.relevant.empty()) prec += precision_at_r(run);
  }
  r.precision = m.n_queries > 0 ? prec / m.n_queries : 0.0;
  r.mrr = runs.empty() ? 0.0 : mean_reciprocal_rank(runs);
  r.degenerate = all_equal;
  return r;
}

}  // namespace codeaug
