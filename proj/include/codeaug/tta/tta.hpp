#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codeaug/data/dataset.hpp"
#include "codeaug/model/harness.hpp"
#include "codeaug/model/learner.hpp"
#include "codeaug/transform/transform.hpp"

namespace codeaug {

struct TtaConfig {
  int copies = 3;
  std::vector<TransformKind> kinds;  // empty means every kind
  std::uint64_t seed = 0;
  std::string aggregation = "orig_plus_mean";
};

/// The transformed copies TTA would use for `s`: distinct variants of the
/// rewritten side (code for classify and search, code_b for clone pairs),
/// drawn from derive_seed(cfg.seed, hash of that text).
std::vector<DatasetSample> tta_copies(const DatasetSample& s, const TtaConfig& cfg);

struct TtaPrediction {
  std::vector<double> scores;  // predict(orig) + mean of predict(copy)
  int copies_used = 0;
  bool fallback = false;  // no variant existed; scores = predict(orig)
};

TtaPrediction tta_predict(const Learner& m, const DatasetSample& s, const TtaConfig& cfg);

/// Metric over TTA decisions. Rows carry tta = true; when `with_baseline`,
/// the plain prediction rows (tta = false) come first. Fallbacks are
/// reported as a `tta_fallbacks` row.
EvalReport tta_evaluate(const Learner& m, const Dataset& test, const TtaConfig& cfg, const std::string& metric,
                        bool with_baseline = true);

}  // namespace codeaug
