#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "codeaug/curriculum/curriculum.hpp"
#include "codeaug/errors.hpp"

using namespace codeaug;

namespace {

Dataset toy() {
  Dataset d;
  d.task = Task::Classify;
  // Mixed origins and levels, labels 0..2.
  const char* code = "int main(){return 0;}";
  d.samples.push_back({"a", Task::Classify, code, "", "", 0, 0, "a", false});
  d.samples.push_back({"a~v1", Task::Classify, code, "", "", 0, 1, "a", false});
  d.samples.push_back({"b", Task::Classify, code, "", "", 1, 0, "b", false});
  d.samples.push_back({"b~v1", Task::Classify, code, "", "", 1, 2, "b", false});
  d.samples.push_back({"c", Task::Classify, code, "", "", 2, 0, "c", false});
  d.samples.push_back({"c~v1", Task::Classify, code, "", "", 2, 1, "c", false});
  return d;
}

}  // namespace

TEST(Pacing, MatchesClosedForms) {
  const double d0 = 0.33;
  const int T = 40;
  for (int s = 0; s <= T; ++s) {
    double x = static_cast<double>(s) / T;
    EXPECT_NEAR(pace_fraction(parse_pacing("linear", d0, T), s), d0 + (1 - d0) * x, 1e-12);
    EXPECT_NEAR(pace_fraction(parse_pacing("geom_progression", d0, T), s), std::exp((1 - x) * std::log(d0)), 1e-12);
    for (int n : {2, 5, 10}) {
      double expected = std::exp(std::log(x * (1 - std::pow(d0, n)) + std::pow(d0, n)) / n);
      EXPECT_NEAR(pace_fraction(parse_pacing("root_" + std::to_string(n), d0, T), s), expected, 1e-12);
    }
    EXPECT_EQ(pace_fraction(parse_pacing("none", d0, T), s), 1.0);
  }
}

TEST(Pacing, StepHasGroupsPlateaus) {
  PacingConfig c = parse_pacing("step", 0.4, 9);
  EXPECT_NEAR(pace_fraction(c, 0), 0.4, 1e-12);
  EXPECT_NEAR(pace_fraction(c, 2), 0.4, 1e-12);
  EXPECT_NEAR(pace_fraction(c, 3), 0.7, 1e-12);
  EXPECT_NEAR(pace_fraction(c, 7), 1.0, 1e-12);
  EXPECT_NEAR(pace_fraction(c, 9), 1.0, 1e-12);
}

TEST(Pacing, EndpointsAndMonotone) {
  for (const char* name : {"linear", "step", "geom_progression", "root_2", "root_5", "root_10", "anti"}) {
    for (int T : {1, 7, 100}) {
      PacingConfig c = parse_pacing(name, 0.25, T);
      EXPECT_NEAR(pace_fraction(c, 0), 0.25, 1e-12) << name;
      EXPECT_NEAR(pace_fraction(c, T), 1.0, 1e-12) << name;
      for (int s = 1; s <= T; ++s) ASSERT_LE(pace_fraction(c, s - 1), pace_fraction(c, s) + 1e-15) << name;
    }
  }
}

TEST(Pacing, RootGrowsFasterThanLinear) {
  const int T = 100;
  EXPECT_GT(pace_fraction(parse_pacing("root_10", 0.33, T), T / 2), pace_fraction(parse_pacing("linear", 0.33, T), T / 2));
  EXPECT_GT(pace_fraction(parse_pacing("root_2", 0.33, T), T / 2), pace_fraction(parse_pacing("linear", 0.33, T), T / 2));
}

TEST(Pacing, BadConfigsRejected) {
  EXPECT_THROW(parse_pacing("cubic"), DataError);
  EXPECT_THROW(parse_pacing("root_1"), DataError);
  EXPECT_THROW(parse_pacing("root_x"), DataError);
  EXPECT_THROW(parse_pacing("linear", 0.0), DataError);
  EXPECT_THROW(parse_pacing("linear", 0.5, 0), DataError);
  EXPECT_EQ(pacing_name(parse_pacing("root_7")), "root_7");
}

TEST(Subset, CeilWithSlack) {
  PacingConfig c = parse_pacing("linear", 0.33, 10);
  EXPECT_EQ(subset_size(c, 0, 100), 33u);
  EXPECT_EQ(subset_size(c, 0, 10), 4u);
  EXPECT_EQ(subset_size(c, 10, 10), 10u);
  EXPECT_EQ(subset_size(parse_pacing("linear", 0.01, 10), 0, 3), 1u);
}

TEST(Subset, PrefixChain) {
  Dataset d = toy();
  for (const char* name : {"linear", "step", "root_10", "anti"}) {
    CurriculumSchedule s = make_schedule(d, {}, parse_pacing(name, 0.2, 12), 3);
    std::vector<std::string> prev;
    for (int t = 0; t <= 12; ++t) {
      auto cur = subset_at(s, t);
      ASSERT_GE(cur.size(), prev.size());
      ASSERT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin())) << name;
      prev = cur;
    }
    EXPECT_EQ(prev.size(), d.samples.size());
  }
}

TEST(Ordering, AugmentationOriginalsFirstThenByLevel) {
  auto order = order_dataset(toy(), {});
  EXPECT_EQ(order, (std::vector<std::string>{"a", "b", "c", "a~v1", "c~v1", "b~v1"}));
}

TEST(Ordering, ClassBasedAndMissingScore) {
  ScoringStrategy s;
  s.kind = ScoringStrategy::Kind::ClassBased;
  s.class_scores = {{0, 0.9}, {1, 0.1}, {2, 0.5}};
  EXPECT_EQ(order_dataset(toy(), s), (std::vector<std::string>{"b", "b~v1", "c", "c~v1", "a", "a~v1"}));
  s.class_scores.erase(2);
  EXPECT_THROW(order_dataset(toy(), s), MissingScore);
}

TEST(Ordering, ExternalInvariantUnderMonotoneRescale) {
  ScoringStrategy s;
  s.kind = ScoringStrategy::Kind::External;
  s.sample_scores = {{"a", 3}, {"a~v1", -1}, {"b", 2}, {"b~v1", 7}, {"c", 0.5}, {"c~v1", 2}};
  auto base = order_dataset(toy(), s);
  EXPECT_EQ(base.front(), "a~v1");
  EXPECT_EQ(base.back(), "b~v1");
  // b and c~v1 tie; dataset order wins.
  EXPECT_LT(std::find(base.begin(), base.end(), "b") - base.begin(),
            std::find(base.begin(), base.end(), "c~v1") - base.begin());
  ScoringStrategy t = s;
  for (auto& [id, v] : t.sample_scores) v = std::exp(v) * 10 + 4;
  EXPECT_EQ(order_dataset(toy(), t), base);
  s.sample_scores.erase("c");
  EXPECT_THROW(order_dataset(toy(), s), MissingScore);
}

TEST(Schedule, AntiReversesNoneShuffles) {
  Dataset d = toy();
  auto easy = make_schedule(d, {}, parse_pacing("linear"), 1).ordering;
  auto anti = make_schedule(d, {}, parse_pacing("anti"), 1).ordering;
  EXPECT_EQ(std::vector<std::string>(easy.rbegin(), easy.rend()), anti);
  auto n1 = make_schedule(d, {}, parse_pacing("none"), 1).ordering;
  EXPECT_EQ(n1, make_schedule(d, {}, parse_pacing("none"), 1).ordering);
  std::sort(n1.begin(), n1.end());
  std::sort(easy.begin(), easy.end());
  EXPECT_EQ(n1, easy);
}

TEST(Schedule, JsonKeys) {
  auto j = nlohmann::json::parse(schedule_json(make_schedule(toy(), {}, parse_pacing("step", 0.5, 4), 1)));
  EXPECT_EQ(j["pacing"], "step");
  EXPECT_EQ(j["T"], 4);
  EXPECT_EQ(j["groups"], 3);
  EXPECT_DOUBLE_EQ(j["delta0"].get<double>(), 0.5);
  EXPECT_EQ(j["ordering"].size(), 6u);
}
