#include <gtest/gtest.h>

#include <set>

#include "codeaug/corpus/generator.hpp"
#include "codeaug/errors.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/tta/tta.hpp"
#include "support.hpp"

using namespace codeaug;

namespace {

// Wrong on the exact original text, right on anything else.
class FooledByOriginal : public Learner {
 public:
  explicit FooledByOriginal(std::set<std::string> originals) : originals_(std::move(originals)) {}
  void fit(const Dataset&, const CurriculumSchedule*, int) override {}
  std::vector<double> predict(const DatasetSample& s) const override {
    if (originals_.count(s.code)) return {0.6, 0.4};
    return {0.0, 1.0};
  }
  std::unique_ptr<Learner> fresh() const override { return std::make_unique<FooledByOriginal>(originals_); }

 private:
  std::set<std::string> originals_;
};

Dataset label_one(Dataset d) {
  for (auto& s : d.samples) s.label = 1;
  return d;
}

}  // namespace

TEST(Tta, ConstantModelGivesDoubleScores) {
  ConstantLearner m({0.25, 0.75});
  const auto& s = testing_support::shipped_corpus().samples[0];
  TtaPrediction p = tta_predict(m, s, TtaConfig{});
  EXPECT_FALSE(p.fallback);
  EXPECT_EQ(p.copies_used, 3);
  EXPECT_NEAR(p.scores[0], 0.5, 1e-12);
  EXPECT_NEAR(p.scores[1], 1.5, 1e-12);
}

TEST(Tta, FallbackWhenNoVariant) {
  ConstantLearner m({1.0, 0.0});
  DatasetSample s{"z", Task::Classify, "int main(){return 0;}", "", "", 0, 0, "z", false};
  TtaConfig cfg;
  cfg.kinds = {TransformKind::ForToWhile};
  TtaPrediction p = tta_predict(m, s, cfg);
  EXPECT_TRUE(p.fallback);
  EXPECT_EQ(p.copies_used, 0);
  EXPECT_EQ(p.scores, (std::vector<double>{1.0, 0.0}));
  Dataset d;
  d.samples = {s};
  EvalReport r = tta_evaluate(m, d, cfg, "accuracy");
  EXPECT_DOUBLE_EQ(*r.value("test", "tta_fallbacks"), 1.0);
}

TEST(Tta, CopiesCorrectAFooledModel) {
  Dataset d = label_one(corpus_dataset(2, 5, 3));
  std::set<std::string> originals;
  for (const auto& s : d.samples) originals.insert(s.code);
  FooledByOriginal m(originals);
  EvalReport r = tta_evaluate(m, d, TtaConfig{}, "accuracy");
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_FALSE(*r.rows[0].tta);
  EXPECT_DOUBLE_EQ(r.rows[0].value, 0.0);
  EXPECT_TRUE(*r.rows[1].tta);
  EXPECT_DOUBLE_EQ(r.rows[1].value, 1.0);
  EXPECT_NE(r.csv().find(",tta\n"), std::string::npos);
}

TEST(Tta, CopiesAreDistinctPreservingAndKeyedByText) {
  TtaConfig cfg;
  cfg.seed = 4;
  for (const auto& s : corpus_dataset(4, 3, 2).samples) {
    auto copies = tta_copies(s, cfg);
    ASSERT_EQ(copies.size(), 3u);
    std::set<std::string> texts = {print_program(parse(s.code))};
    for (const auto& c : copies) {
      EXPECT_TRUE(texts.insert(c.code).second);
      EXPECT_EQ(c.label, s.label);
      for (const auto& in : oracle_inputs(s.id, 1, 2)) EXPECT_EQ(run(parse(c.code), in), run(parse(s.code), in));
    }
    // Same text under another id gets the same copies.
    DatasetSample renamed = s;
    renamed.id = "other";
    auto again = tta_copies(renamed, cfg);
    for (std::size_t i = 0; i < copies.size(); ++i) EXPECT_EQ(again[i].code, copies[i].code);
  }
}

TEST(Tta, ArgmaxUnaffectedByHalving) {
  Dataset base = corpus_dataset(3, 8, 2);
  LinearLearner m(LearnerConfig{});
  m.fit(base, nullptr, 3);
  TtaConfig cfg;
  int agree = 0;
  for (const auto& s : base.samples) {
    TtaPrediction p = tta_predict(m, s, cfg);
    agree += argmax(p.scores) == s.label;
  }
  EvalReport r = tta_evaluate(m, base, cfg, "accuracy", false);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[0].value, static_cast<double>(agree) / base.samples.size(), 1e-12);
}

TEST(Tta, SingleCopyAndBadCopyCount) {
  ConstantLearner m({0.5, 0.5});
  const auto& s = testing_support::shipped_corpus().samples[1];
  TtaConfig cfg;
  cfg.copies = 1;
  EXPECT_EQ(tta_predict(m, s, cfg).copies_used, 1);
  cfg.copies = 0;
  EXPECT_THROW(tta_predict(m, s, cfg), DataError);
}

TEST(Tta, ClonePairsRewriteSecondSide) {
  const auto& c = testing_support::shipped_corpus().samples;
  DatasetSample p{"p", Task::ClonePair, c[0].code, c[1].code, "", 1, 0, "p", false};
  for (const auto& copy : tta_copies(p, TtaConfig{})) {
    EXPECT_EQ(copy.code, p.code);
    EXPECT_NE(copy.code_b, p.code_b);
  }
}
