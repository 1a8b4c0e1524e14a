#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "codeaug/curriculum/curriculum.hpp"
#include "codeaug/data/dataset.hpp"

namespace codeaug {

enum class FeatureKind { Unigram, Bigram, Both };

std::string_view feature_name(FeatureKind f);
FeatureKind parse_feature(std::string_view name);

/// Granularity of the curriculum step counter.
enum class PaceUnit { Epoch, Batch };

std::string_view pace_unit_name(PaceUnit u);
PaceUnit parse_pace_unit(std::string_view name);

struct LearnerConfig {
  FeatureKind feature = FeatureKind::Both;
  int vocab_cap = 1000;
  double learning_rate = 0.5;
  int epochs = 3;
  int batch = 16;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
  PaceUnit pace_unit = PaceUnit::Batch;

  void validate() const;
  bool operator==(const LearnerConfig&) const = default;
};

/// Linear softmax over hashed token n-gram features. `vocab[i]` is the
/// n-gram hash owning feature column i; `weights` is row-major
/// classes x features.
struct ModelState {
  Task task = Task::Classify;
  LearnerConfig cfg;
  int n_classes = 0;
  std::vector<std::uint64_t> vocab;
  std::vector<double> weights;
  std::vector<double> bias;

  int n_features() const;  // pair tasks use 2 * |vocab| columns
  bool operator==(const ModelState&) const = default;
};

using SparseVec = std::vector<std::pair<int, double>>;

/// Token n-gram hashes of a program (lexer tokens) or a query (lowercased
/// alphanumeric words). Literal tokens are prefixed by their kind.
std::vector<std::uint64_t> ngram_hashes(std::string_view text, FeatureKind feature, bool is_query = false);

/// Maps a hash list onto the vocabulary: log(1 + count), L2-normalized.
SparseVec featurize(const std::vector<std::uint64_t>& hashes, const std::map<std::uint64_t, int>& index);

/// Trains the reference learner. With a schedule and PaceUnit::Epoch, epoch e
/// draws only subset_at(schedule, e) and the pacing horizon T is epochs - 1.
/// With PaceUnit::Batch, mini-batch s is sampled with replacement from the
/// admitted prefix at step s, and T is epochs * ceil(n / batch) - 1.
/// `n_classes` = 0 infers 1 + the largest training label.
/// Throws EmptySubset when the schedule admits nothing at step 0.
ModelState train(const Dataset& d, const LearnerConfig& cfg, const CurriculumSchedule* schedule = nullptr,
                 int n_classes = 0);

/// classify: per-class probabilities; clone_pair: {P(clone)};
/// search_pair: {similarity}. Throws UnknownTask on a task mismatch.
std::vector<double> predict(const ModelState& m, const DatasetSample& s);

/// Mean training cross-entropy of a classify model.
double mean_loss(const ModelState& m, const Dataset& d);

std::string serialize(const ModelState& m);
ModelState deserialize(std::string_view bytes);  // throws DataError on bad or foreign files
void save_model(const ModelState& m, const std::string& path);
ModelState load_model(const std::string& path);

/// Pluggable model boundary: every harness, curriculum and TTA routine
/// below only calls these three members.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual void fit(const Dataset& d, const CurriculumSchedule* schedule, int n_classes) = 0;
  virtual std::vector<double> predict(const DatasetSample& s) const = 0;
  /// Untrained copy with the same configuration.
  virtual std::unique_ptr<Learner> fresh() const = 0;
};

class LinearLearner : public Learner {
 public:
  explicit LinearLearner(LearnerConfig cfg) : cfg_(cfg) {}
  explicit LinearLearner(ModelState state) : cfg_(state.cfg), state_(std::move(state)) {}

  void fit(const Dataset& d, const CurriculumSchedule* schedule, int n_classes) override {
    state_ = train(d, cfg_, schedule, n_classes);
  }
  std::vector<double> predict(const DatasetSample& s) const override { return codeaug::predict(state_, s); }
  std::unique_ptr<Learner> fresh() const override { return std::make_unique<LinearLearner>(cfg_); }

  const ModelState& state() const { return state_; }

 private:
  LearnerConfig cfg_;
  ModelState state_;
};

/// Exact-text lookup: predicts the empirical label distribution of training
/// samples with byte-identical code, uniform for unseen code. Classify only.
class MemorizingLearner : public Learner {
 public:
  void fit(const Dataset& d, const CurriculumSchedule* schedule, int n_classes) override;
  std::vector<double> predict(const DatasetSample& s) const override;
  std::unique_ptr<Learner> fresh() const override { return std::make_unique<MemorizingLearner>(); }

 private:
  int n_classes_ = 0;
  std::map<std::string, std::vector<double>> table_;
};

/// Learner whose output ignores the input.
class ConstantLearner : public Learner {
 public:
  explicit ConstantLearner(std::vector<double> out) : out_(std::move(out)) {}
  void fit(const Dataset&, const CurriculumSchedule*, int) override {}
  std::vector<double> predict(const DatasetSample&) const override { return out_; }
  std::unique_ptr<Learner> fresh() const override { return std::make_unique<ConstantLearner>(out_); }

 private:
  std::vector<double> out_;
};

int argmax(const std::vector<double>& v);  // lowest index among ties

}  // namespace codeaug
