#include "codeaug/tta/tta.hpp"

#include <map>

#include "codeaug/augment/augmentor.hpp"
#include "codeaug/errors.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

namespace {

std::vector<TransformKind> kinds_or_all(const TtaConfig& cfg) {
  if (!cfg.kinds.empty()) return cfg.kinds;
  return {std::begin(kAllTransformKinds), std::end(kAllTransformKinds)};
}

std::string& rewritten_side(DatasetSample& s) { return s.task == Task::ClonePair ? s.code_b : s.code; }

std::vector<std::string> copy_texts(const std::string& code, const TtaConfig& cfg) {
  if (cfg.copies < 1) throw DataError("TTA needs at least one copy");
  auto kinds = kinds_or_all(cfg);
  // Keyed by the text itself so equal code gets equal copies wherever it appears.
  std::uint64_t seed = derive_seed(cfg.seed, fnv1a(code));
  std::vector<std::string> out;
  for (auto& v : distinct_variants(code, cfg.copies, kinds, seed, "tta")) out.push_back(std::move(v.code));
  return out;
}

TtaPrediction aggregate(const Learner& m, const DatasetSample& s, const std::vector<std::string>& texts) {
  TtaPrediction out;
  out.scores = m.predict(s);
  out.copies_used = static_cast<int>(texts.size());
  if (texts.empty()) {
    out.fallback = true;
    return out;
  }
  std::vector<double> mean(out.scores.size(), 0.0);
  for (const auto& t : texts) {
    DatasetSample c = s;
    rewritten_side(c) = t;
    auto p = m.predict(c);
    for (std::size_t i = 0; i < mean.size() && i < p.size(); ++i) mean[i] += p[i];
  }
  for (std::size_t i = 0; i < mean.size(); ++i) out.scores[i] += mean[i] / static_cast<double>(texts.size());
  return out;
}

// Presents TTA scores through the Learner interface so every metric path is
// shared with plain evaluation. Outputs are halved (mean of the two
// perspectives) so clone thresholds stay at 0.5; argmax and rankings are
// unaffected by the constant factor.
class TtaView : public Learner {
 public:
  TtaView(const Learner& inner, const TtaConfig& cfg) : inner_(inner), cfg_(cfg) {}

  void fit(const Dataset&, const CurriculumSchedule*, int) override {
    throw DataError("TTA view cannot be trained");
  }
  std::vector<double> predict(const DatasetSample& s) const override {
    DatasetSample key = s;
    const std::string& text = rewritten_side(key);
    auto it = cache_.find(text);
    if (it == cache_.end()) it = cache_.emplace(text, copy_texts(text, cfg_)).first;
    TtaPrediction p = aggregate(inner_, s, it->second);
    if (p.fallback) {
      ++fallbacks_;
      return p.scores;
    }
    for (auto& x : p.scores) x *= 0.5;
    return p.scores;
  }
  std::unique_ptr<Learner> fresh() const override { return std::make_unique<TtaView>(inner_, cfg_); }

  int fallbacks() const { return fallbacks_; }

 private:
  const Learner& inner_;
  TtaConfig cfg_;
  mutable std::map<std::string, std::vector<std::string>> cache_;
  mutable int fallbacks_ = 0;
};

}  // namespace

std::vector<DatasetSample> tta_copies(const DatasetSample& s, const TtaConfig& cfg) {
  DatasetSample base = s;
  std::vector<DatasetSample> out;
  for (auto& t : copy_texts(rewritten_side(base), cfg)) {
    DatasetSample c = s;
    rewritten_side(c) = std::move(t);
    out.push_back(std::move(c));
  }
  return out;
}

TtaPrediction tta_predict(const Learner& m, const DatasetSample& s, const TtaConfig& cfg) {
  DatasetSample base = s;
  return aggregate(m, s, copy_texts(rewritten_side(base), cfg));
}

EvalReport tta_evaluate(const Learner& m, const Dataset& test, const TtaConfig& cfg, const std::string& metric,
                        bool with_baseline) {
  EvalReport report;
  if (with_baseline) report.rows.push_back({"test", metric, score_dataset(m, test, metric), cfg.seed, false});
  TtaView view(m, cfg);
  report.rows.push_back({"test", metric, score_dataset(view, test, metric), cfg.seed, true});
  report.rows.push_back({"test", "tta_fallbacks", static_cast<double>(view.fallbacks()), cfg.seed, true});
  return report;
}

}  // namespace codeaug
