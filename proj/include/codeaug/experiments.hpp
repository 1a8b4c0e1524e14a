#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codeaug/curriculum/curriculum.hpp"
#include "codeaug/data/dataset.hpp"
#include "codeaug/model/learner.hpp"
#include "codeaug/transform/transform.hpp"

namespace codeaug {

/// Shared settings of the experiment drivers. Defaults are the desk-scale
/// configuration: 8 classes x 40 programs, m = 3, k = 3, five seeds.
struct ExperimentConfig {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  LearnerConfig learner;
  std::vector<TransformKind> kinds = {std::begin(kAllTransformKinds), std::end(kAllTransformKinds)};
  int k = 3;        // variant chain depth
  int m = 3;        // variants per original
  int folds = 5;    // leave-one-out folds
  double test_fraction = 0.25;
  double delta0 = 0.33;
  std::string strategy = "augmentation";  // "augmentation" or "class"
  std::string pacing = "root_10";         // CL pacing for component toggles
  int tta_copies = 3;
};

/// Classify dataset of generated programs (k = 0, own origin).
Dataset corpus_dataset(int n_classes, int per_class, std::uint64_t seed);

struct Hyp1Result {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> grid;  // [seed][level], levels D_0 .. D_k
  std::string metric;

  std::vector<double> mean() const;
  std::string csv() const;  // seed,dataset,metric,value
};

/// Builds D_1..D_k, trains on their union with D_0, scores every level.
Hyp1Result run_hypothesis1(const Dataset& d, const ExperimentConfig& cfg, const std::string& metric = "map");

struct Hyp2Result {
  // Seed-mean class difficulty.
  std::map<int, double> original_set;     // leave-one-out over the original set
  std::map<int, double> augmented_set;    // leave-one-out over the augmented set, all samples
  std::map<int, double> aug_originals;    // augmented-set run, k = 0 samples only
  std::map<int, double> aug_variants;     // augmented-set run, k > 0 samples only
  std::vector<std::string> warnings;

  /// Classes whose variant difficulty is at least their original difficulty.
  double harder_fraction() const;
  /// Rows sorted by ascending original-set difficulty.
  std::string csv() const;
};

Hyp2Result run_hypothesis2(const Dataset& d, const ExperimentConfig& cfg);

struct AblationRow {
  std::string config;  // pacing name for the sweep, component label for toggles
  bool da = true;
  bool cl = true;
  bool tta = false;
  std::uint64_t seed = 0;
  double accuracy = 0;
};

/// Pacing sweep: augmented training, curriculum with each pacing function
/// ("none" trains in shuffled order), no TTA. Accuracy on the held-out
/// original test split. One row per (pacing, seed).
std::vector<AblationRow> run_pacing_sweep(const Dataset& d, const ExperimentConfig& cfg,
                                          const std::vector<std::string>& pacings);

/// Component toggles over {DA-training, CL, TTA}: full, each removed, and
/// all removed. CL needs augmented data, so it is off whenever DA is off.
std::vector<AblationRow> run_component_ablation(const Dataset& d, const ExperimentConfig& cfg);

std::string ablation_csv(const std::vector<AblationRow>& rows);
std::map<std::string, double> ablation_means(const std::vector<AblationRow>& rows);

inline const std::vector<std::string>& default_pacings() {
  static const std::vector<std::string> p = {"none",   "anti",   "linear", "step", "geom_progression",
                                             "root_2", "root_5", "root_10"};
  return p;
}

/// Scoring strategy for a training set: augmentation-based, or class-based
/// with leave-one-out class means.
ScoringStrategy make_strategy(const Dataset& train, const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace codeaug
