#include "codeaug/experiments.hpp"

#include "codeaug/augment/augmentor.hpp"
#include "codeaug/corpus/generator.hpp"
#include "codeaug/errors.hpp"
#include "codeaug/metrics/metrics.hpp"
#include "codeaug/model/harness.hpp"
#include "codeaug/tta/tta.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

Dataset corpus_dataset(int n_classes, int per_class, std::uint64_t seed) {
  Dataset d;
  d.task = Task::Classify;
  for (auto& p : generate_corpus(n_classes, per_class, seed)) {
    DatasetSample s;
    s.id = p.id;
    s.code = std::move(p.code);
    s.label = p.label;
    s.origin_id = s.id;
    d.samples.push_back(std::move(s));
  }
  return d;
}

namespace {

LearnerConfig seeded(const ExperimentConfig& cfg, std::uint64_t seed) {
  LearnerConfig l = cfg.learner;
  l.seed = derive_seed(seed, "learner");
  return l;
}

}  // namespace

std::vector<double> Hyp1Result::mean() const {
  std::vector<double> out;
  if (grid.empty()) return out;
  out.assign(grid.front().size(), 0.0);
  for (const auto& row : grid) {
    for (std::size_t t = 0; t < row.size(); ++t) out[t] += row[t];
  }
  for (auto& v : out) v /= static_cast<double>(grid.size());
  return out;
}

std::string Hyp1Result::csv() const {
  std::string out = "seed,dataset,metric,value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t t = 0; t < grid[i].size(); ++t) {
      out += std::to_string(seeds[i]) + ",D" + std::to_string(t) + "," + metric + "," + format_double(grid[i][t]) +
             "\n";
    }
  }
  return out;
}

Hyp1Result run_hypothesis1(const Dataset& d, const ExperimentConfig& cfg, const std::string& metric) {
  Hyp1Result r;
  r.metric = metric;
  r.seeds = cfg.seeds;
  for (auto seed : cfg.seeds) {
    VariantChain chain = build_variant_chain(d, cfg.k, cfg.kinds, derive_seed(seed, "chain"));
    std::vector<Dataset> levels = {d};
    for (auto& l : chain.levels) levels.push_back(std::move(l));
    Dataset all;
    all.task = d.task;
    for (const auto& l : levels) {
      all.samples.insert(all.samples.end(), l.samples.begin(), l.samples.end());
    }
    LinearLearner model(seeded(cfg, seed));
    model.fit(all, nullptr, d.num_classes());
    EvalReport rep = evaluate_variants(model, levels, metric, seed);
    std::vector<double> row;
    for (const auto& x : rep.rows) row.push_back(x.value);
    r.grid.push_back(std::move(row));
  }
  return r;
}

double Hyp2Result::harder_fraction() const {
  if (aug_originals.empty()) return 0.0;
  int harder = 0;
  for (const auto& [c, v] : aug_originals) {
    auto it = aug_variants.find(c);
    if (it != aug_variants.end() && it->second >= v) ++harder;
  }
  return static_cast<double>(harder) / static_cast<double>(aug_originals.size());
}

std::string Hyp2Result::csv() const {
  std::vector<std::pair<int, double>> order(original_set.begin(), original_set.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  auto get = [](const std::map<int, double>& m, int c) {
    auto it = m.find(c);
    return it == m.end() ? std::string("") : format_double(it->second);
  };
  std::string out = "rank,class,original_set,augmented_set,aug_originals,aug_variants\n";
  int rank = 0;
  for (const auto& [c, v] : order) {
    out += std::to_string(rank++) + "," + std::to_string(c) + "," + format_double(v) + "," + get(augmented_set, c) +
           "," + get(aug_originals, c) + "," + get(aug_variants, c) + "\n";
  }
  return out;
}

Hyp2Result run_hypothesis2(const Dataset& d, const ExperimentConfig& cfg) {
  Hyp2Result r;
  const double n_seeds = static_cast<double>(cfg.seeds.size());
  for (auto seed : cfg.seeds) {
    LinearLearner proto(seeded(cfg, seed));
    FoldLog log;
    auto orig = leave_one_out_scores(d, cfg.folds, proto, derive_seed(seed, "folds"), &log);
    for (const auto& [c, v] : class_difficulty(orig, d)) r.original_set[c] += v / n_seeds;

    Dataset aug = balanced_augment(d, cfg.m, cfg.kinds, derive_seed(seed, "augment")).dataset;
    auto scores = leave_one_out_scores(aug, cfg.folds, proto, derive_seed(seed, "folds"), &log);
    for (const auto& [c, v] : class_difficulty(scores, aug)) r.augmented_set[c] += v / n_seeds;
    std::map<int, std::pair<double, int>> o, a;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& s = aug.samples[i];
      auto& acc = s.k == 0 ? o[s.label] : a[s.label];
      acc.first += scores[i].score;
      acc.second += 1;
    }
    for (const auto& [c, v] : o) r.aug_originals[c] += v.first / v.second / n_seeds;
    for (const auto& [c, v] : a) r.aug_variants[c] += v.first / v.second / n_seeds;
    for (auto& w : log.warnings) r.warnings.push_back(std::move(w));
  }
  return r;
}

ScoringStrategy make_strategy(const Dataset& train, const ExperimentConfig& cfg, std::uint64_t seed) {
  ScoringStrategy st;
  if (cfg.strategy == "augmentation") {
    st.kind = ScoringStrategy::Kind::AugmentationBased;
  } else if (cfg.strategy == "class") {
    st.kind = ScoringStrategy::Kind::ClassBased;
    LinearLearner proto(seeded(cfg, seed));
    auto scores = leave_one_out_scores(train, cfg.folds, proto, derive_seed(seed, "folds"));
    for (const auto& [c, v] : class_difficulty(scores, train)) st.class_scores[c] = v;
  } else {
    throw DataError("unknown scoring strategy: " + cfg.strategy);
  }
  return st;
}

namespace {

struct Split {
  Dataset train;
  Dataset augmented;
  Dataset test;
};

Split split_for(const Dataset& d, const ExperimentConfig& cfg, std::uint64_t seed) {
  Split s;
  std::tie(s.train, s.test) = split_dataset(d, cfg.test_fraction, derive_seed(seed, "split"));
  s.augmented = balanced_augment(s.train, cfg.m, cfg.kinds, derive_seed(seed, "augment")).dataset;
  return s;
}

double run_config(const Split& s, const ExperimentConfig& cfg, std::uint64_t seed, bool da, bool cl,
                  const std::string& pacing, bool tta, const ScoringStrategy* strategy) {
  const Dataset& train = da ? s.augmented : s.train;
  LinearLearner model(seeded(cfg, seed));
  int n_classes = std::max(s.train.num_classes(), s.test.num_classes());
  if (cl) {
    PacingConfig pc = parse_pacing(pacing, cfg.delta0, std::max(1, cfg.learner.epochs - 1));
    CurriculumSchedule sched = make_schedule(train, *strategy, pc, derive_seed(seed, "schedule"));
    model.fit(train, &sched, n_classes);
  } else {
    model.fit(train, nullptr, n_classes);
  }
  if (!tta) return score_dataset(model, s.test, "accuracy");
  TtaConfig tc;
  tc.copies = cfg.tta_copies;
  tc.kinds = cfg.kinds;
  tc.seed = derive_seed(seed, "tta");
  return tta_evaluate(model, s.test, tc, "accuracy", false).rows.front().value;
}

}  // namespace

std::vector<AblationRow> run_pacing_sweep(const Dataset& d, const ExperimentConfig& cfg,
                                          const std::vector<std::string>& pacings) {
  std::vector<AblationRow> rows;
  for (auto seed : cfg.seeds) {
    Split s = split_for(d, cfg, seed);
    ScoringStrategy st = make_strategy(s.augmented, cfg, seed);
    for (const auto& p : pacings) {
      // "none" still goes through a (shuffled, f = 1) schedule so every row
      // shares the same step sampler.
      double acc = run_config(s, cfg, seed, true, true, p, false, &st);
      rows.push_back({p, true, p != "none", false, seed, acc});
    }
  }
  return rows;
}

std::vector<AblationRow> run_component_ablation(const Dataset& d, const ExperimentConfig& cfg) {
  struct Toggle {
    const char* name;
    bool da, cl, tta;
  };
  static const Toggle toggles[] = {
      {"full", true, true, true},      {"no_da_training", false, false, true}, {"no_cl", true, false, true},
      {"no_tta", true, true, false},   {"plain", false, false, false},
  };
  std::vector<AblationRow> rows;
  for (auto seed : cfg.seeds) {
    Split s = split_for(d, cfg, seed);
    ScoringStrategy st = make_strategy(s.augmented, cfg, seed);
    for (const auto& t : toggles) {
      double acc = run_config(s, cfg, seed, t.da, t.cl, cfg.pacing, t.tta, &st);
      rows.push_back({t.name, t.da, t.cl, t.tta, seed, acc});
    }
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "config,da_training,cl,tta,seed,accuracy\n";
  for (const auto& r : rows) {
    out += r.config + "," + (r.da ? "1" : "0") + "," + (r.cl ? "1" : "0") + "," + (r.tta ? "1" : "0") + "," +
           std::to_string(r.seed) + "," + format_double(r.accuracy) + "\n";
  }
  return out;
}

std::map<std::string, double> ablation_means(const std::vector<AblationRow>& rows) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    acc[r.config].first += r.accuracy;
    acc[r.config].second += 1;
  }
  std::map<std::string, double> out;
  for (const auto& [k, v] : acc) out[k] = v.first / v.second;
  return out;
}

}  // namespace codeaug
