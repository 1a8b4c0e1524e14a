#include <gtest/gtest.h>

#include <map>
#include <set>

#include "codeaug/augment/augmentor.hpp"
#include "codeaug/corpus/generator.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/interp/interpreter.hpp"
#include "support.hpp"

using namespace codeaug;

namespace {

std::vector<TransformKind> all_kinds() { return {std::begin(kAllTransformKinds), std::end(kAllTransformKinds)}; }

Dataset small() { return corpus_dataset(4, 6, 23); }

}  // namespace

TEST(DistinctVariants, DistinctFromOriginalAndEachOther) {
  auto kinds = all_kinds();
  for (const auto& s : small().samples) {
    auto vs = distinct_variants(s.code, 3, kinds, 9, s.id);
    ASSERT_EQ(vs.size(), 3u) << s.id;
    std::set<std::string> texts = {print_program(parse(s.code))};
    for (const auto& v : vs) {
      EXPECT_TRUE(texts.insert(v.code).second) << s.id;
      EXPECT_GE(v.record.steps.size(), static_cast<std::size_t>(kMinChainDepth));
      EXPECT_LE(v.record.steps.size(), static_cast<std::size_t>(kMaxChainDepth));
      EXPECT_EQ(print_program(replay(parse(s.code), v.record)), v.code);
    }
  }
}

TEST(DistinctVariants, NoApplicableTransformGivesNothing) {
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile};
  EXPECT_TRUE(distinct_variants("int main(){return 0;}", 3, kinds, 1, "x").empty());
}

TEST(Chain, LevelsKeepSizeLabelsAndLineage) {
  Dataset d = small();
  auto kinds = all_kinds();
  VariantChain c = build_variant_chain(d, 3, kinds, 4);
  ASSERT_EQ(c.levels.size(), 3u);
  ASSERT_EQ(c.records.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    const Dataset& level = c.levels[t];
    ASSERT_EQ(level.samples.size(), d.samples.size());
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      const auto& s = level.samples[i];
      EXPECT_EQ(s.label, d.samples[i].label);
      EXPECT_EQ(s.origin_id, d.samples[i].id);
      EXPECT_EQ(s.k, static_cast<int>(t + 1));
      // The record composes from the origin.
      const auto& rec = c.records[t][i];
      EXPECT_EQ(rec.id, s.id);
      EXPECT_EQ(print_program(replay(parse(d.samples[i].code), rec.record)), s.code) << s.id;
    }
  }
}

TEST(Chain, LevelsPreserveBehavior) {
  Dataset d = small();
  auto kinds = all_kinds();
  VariantChain c = build_variant_chain(d, 3, kinds, 8);
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    Ast orig = parse(d.samples[i].code);
    for (const auto& in : oracle_inputs(d.samples[i].id, 8, 3)) {
      ExecResult ref = run(orig, in);
      for (const auto& level : c.levels) ASSERT_EQ(run(parse(level.samples[i].code), in), ref);
    }
  }
}

TEST(Chain, CarriedWhenNothingApplies) {
  Dataset d;
  d.samples.push_back({"z", Task::Classify, "int main(){return 0;}", "", "", 0, 0, "z", false});
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile};
  VariantChain c = build_variant_chain(d, 2, kinds, 1);
  ASSERT_EQ(c.levels.size(), 2u);
  EXPECT_TRUE(c.levels[0].samples[0].carried);
  EXPECT_TRUE(c.levels[1].samples[0].carried);
  EXPECT_EQ(c.levels[1].samples[0].code, c.levels[0].samples[0].code);
}

TEST(Balanced, RatioOnDeskCorpus) {
  const Dataset& d = testing_support::shipped_corpus();
  AugmentResult r = balanced_augment(d, 3, all_kinds(), 17);
  double ratio = static_cast<double>(r.dataset.samples.size()) / d.samples.size();
  EXPECT_GE(ratio, 3.8);
  EXPECT_LE(ratio, 4.0);
  EXPECT_EQ(r.dataset.samples.size(), d.samples.size() * 4 - static_cast<std::size_t>(r.shortfall_total()));
}

TEST(Balanced, LabelsLineageAndOrder) {
  Dataset d = small();
  AugmentResult r = balanced_augment(d, 3, all_kinds(), 2);
  r.dataset.validate();
  std::map<std::string, const DatasetSample*> origin;
  for (const auto& s : d.samples) origin[s.id] = &s;
  std::map<std::string, int> per_origin;
  std::string last_origin;
  for (const auto& s : r.dataset.samples) {
    ASSERT_TRUE(origin.count(s.origin_id));
    EXPECT_EQ(s.label, origin[s.origin_id]->label);
    if (s.k == 0) {
      EXPECT_EQ(s.id, s.origin_id);
      last_origin = s.id;
    } else {
      EXPECT_EQ(s.origin_id, last_origin) << "variants follow their origin";
      per_origin[s.origin_id] += 1;
    }
  }
  int shortfall = r.shortfall_total();
  int lo = 3, hi = 0;
  for (const auto& s : d.samples) {
    lo = std::min(lo, per_origin[s.id]);
    hi = std::max(hi, per_origin[s.id]);
  }
  EXPECT_LE(hi - lo, shortfall);
  // Records replay to the variant bytes.
  std::map<std::string, const DatasetSample*> by_id;
  for (const auto& s : r.dataset.samples) by_id[s.id] = &s;
  for (const auto& rec : r.records) {
    const DatasetSample* v = by_id.at(rec.id);
    EXPECT_EQ(print_program(replay(parse(origin[v->origin_id]->code), rec.record)), v->code);
  }
}

TEST(Balanced, Deterministic) {
  Dataset d = small();
  EXPECT_EQ(to_jsonl(balanced_augment(d, 3, all_kinds(), 5).dataset),
            to_jsonl(balanced_augment(d, 3, all_kinds(), 5).dataset));
}

TEST(Balanced, ShortfallReportedNotPadded) {
  Dataset d;
  d.samples.push_back({"z", Task::Classify, "int main(){return 0;}", "", "", 0, 0, "z", false});
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile};
  AugmentResult r = balanced_augment(d, 1, kinds, 1);
  EXPECT_EQ(r.dataset.samples.size(), 1u);
  ASSERT_EQ(r.shortfall.size(), 1u);
  EXPECT_EQ(r.shortfall[0].first, "z");
  EXPECT_EQ(r.shortfall[0].second, 1);
}

TEST(Balanced, ClonePairsRewriteOneSide) {
  const auto& corpus = small().samples;
  Dataset d;
  d.task = Task::ClonePair;
  d.samples.push_back({"p", Task::ClonePair, corpus[0].code, corpus[1].code, "", 1, 0, "p", false});
  AugmentResult r = balanced_augment(d, 3, all_kinds(), 3);
  ASSERT_EQ(r.dataset.samples.size(), 4u);
  std::string a = print_program(parse(corpus[0].code));
  std::string b = print_program(parse(corpus[1].code));
  for (std::size_t i = 1; i < r.dataset.samples.size(); ++i) {
    const auto& s = r.dataset.samples[i];
    EXPECT_EQ(s.label, 1);
    bool a_kept = print_program(parse(s.code)) == a;
    bool b_kept = print_program(parse(s.code_b)) == b;
    EXPECT_TRUE(a_kept != b_kept) << "exactly one side rewritten";
  }
}

TEST(Balanced, SearchPairsKeepQuery) {
  Dataset d;
  d.task = Task::SearchPair;
  d.samples.push_back({"q", Task::SearchPair, small().samples[0].code, "", "largest element", 0, 0, "q", false});
  AugmentResult r = balanced_augment(d, 3, all_kinds(), 3);
  ASSERT_EQ(r.dataset.samples.size(), 4u);
  for (const auto& s : r.dataset.samples) EXPECT_EQ(s.query, "largest element");
}
