#include "codeaug/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "codeaug/errors.hpp"

namespace codeaug {

Prf precision_recall_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw DataError("confusion counts must be nonnegative");
  if (tp + fp == 0) throw DegenerateDenominator("precision undefined: tp + fp = 0");
  if (tp + fn == 0) throw DegenerateDenominator("recall undefined: tp + fn = 0");
  Prf r;
  r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

std::vector<std::string> rank_candidates(std::vector<std::pair<std::string, double>> scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (auto& [id, s] : scored) out.push_back(std::move(id));
  return out;
}

double average_precision(const RankedRetrieval& run) {
  if (run.relevant.empty()) throw DataError("query " + run.query + " has no relevant candidates");
  double sum = 0;
  int hits = 0;
  for (std::size_t i = 0; i < run.ranked.size(); ++i) {
    if (run.relevant.count(run.ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(run.relevant.size());
}

double precision_at_r(const RankedRetrieval& run) {
  if (run.relevant.empty()) throw DataError("query " + run.query + " has no relevant candidates");
  std::size_t r = run.relevant.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r && i < run.ranked.size(); ++i) hits += run.relevant.count(run.ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(r);
}

MapResult mean_average_precision(const std::vector<RankedRetrieval>& runs) {
  if (runs.empty()) throw DataError("mean average precision needs at least one query");
  MapResult r;
  double sum = 0;
  for (const auto& run : runs) {
    if (run.relevant.empty()) {
      ++r.skipped;
      continue;
    }
    sum += average_precision(run);
    ++r.n_queries;
  }
  r.value = r.n_queries > 0 ? sum / r.n_queries : 0.0;
  return r;
}

double mean_reciprocal_rank(const std::vector<RankedRetrieval>& runs) {
  if (runs.empty()) throw DataError("mean reciprocal rank needs at least one query");
  double sum = 0;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.ranked.size(); ++i) {
      if (run.relevant.count(run.ranked[i])) {
        sum += 1.0 / static_cast<double>(i + 1);
        break;
      }
    }
  }
  return sum / static_cast<double>(runs.size());
}

RetrievalResult retrieval_eval(const std::vector<std::string>& ids, const std::vector<int>& labels,
                               const std::vector<std::vector<double>>& embeddings) {
  if (ids.size() != labels.size() || ids.size() != embeddings.size()) {
    throw DataError("retrieval_eval: ids, labels and embeddings differ in length");
  }
  return retrieval_eval_with(ids, labels, [&](std::size_t a, std::size_t b) {
    const auto& x = embeddings[a];
    const auto& y = embeddings[b];
    double s = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) s += x[i] * y[i];
    return s;
  });
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string retrieval_csv(const RetrievalResult& r, std::uint64_t seed, bool header) {
  std::string out = header ? "metric,value,n_queries,seed\n" : "";
  auto row = [&](const char* name, double v) {
    out += std::string(name) + "," + format_double(v) + "," + std::to_string(r.n_queries) + "," +
           std::to_string(seed) + "\n";
  };
  row("map", r.map);
  row("precision", r.precision);
  row("mrr", r.mrr);
  return out;
}

}  // namespace codeaug
