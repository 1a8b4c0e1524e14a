#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codeaug/data/dataset.hpp"
#include "codeaug/model/learner.hpp"

namespace codeaug {

struct EvalRow {
  std::string dataset;
  std::string metric;
  double value = 0;
  std::uint64_t seed = 0;
  std::optional<bool> tta;  // present only in TTA-aware reports
};

struct EvalReport {
  std::vector<EvalRow> rows;

  /// `dataset,metric,value,seed`, plus a `tta` column when any row sets it.
  std::string csv(bool header = true) const;
  std::optional<double> value(const std::string& dataset, const std::string& metric) const;
};

/// Metric names: "accuracy", "map", "precision" (precision@R), "mrr".
bool is_known_metric(const std::string& metric);

/// Scores one dataset. Retrieval metrics rank the pool against itself by
/// dot products of predicted class distributions (same class = relevant).
double score_dataset(const Learner& m, const Dataset& d, const std::string& metric);

/// One row per dataset of `chain` ([D_0 .. D_k]) named D0, D1, ...
EvalReport evaluate_variants(const Learner& m, const std::vector<Dataset>& chain, const std::string& metric,
                             std::uint64_t seed);

struct DifficultyScore {
  std::string sample_id;
  double score = 0;  // held-out cross-entropy
};

struct FoldLog {
  std::vector<std::vector<std::string>> held_out;  // per fold
  std::vector<std::vector<std::string>> trained_on;
  std::vector<std::string> warnings;
};

/// Scores every sample with the fold model that did not see it. Samples
/// sharing an origin_id always land in the same fold, so a variant is never
/// scored by a model trained on its origin or siblings. Origins are shuffled
/// by `seed` and dealt round-robin into `n_folds` folds. A fold with fewer
/// samples than classes produces a FoldTooSmall warning in `log`.
/// Scores come back in dataset order. Folds train concurrently.
std::vector<DifficultyScore> leave_one_out_scores(const Dataset& d, int n_folds, const Learner& prototype,
                                                  std::uint64_t seed, FoldLog* log = nullptr);

/// (class, mean score) sorted by ascending mean, then class id.
std::vector<std::pair<int, double>> class_difficulty(const std::vector<DifficultyScore>& scores, const Dataset& d);

}  // namespace codeaug
