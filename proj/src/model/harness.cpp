#include "codeaug/model/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "codeaug/errors.hpp"
#include "codeaug/metrics/metrics.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

std::string EvalReport::csv(bool header) const {
  bool with_tta = std::any_of(rows.begin(), rows.end(), [](const EvalRow& r) { return r.tta.has_value(); });
  std::string out;
  if (header) out += with_tta ? "dataset,metric,value,seed,tta\n" : "dataset,metric,value,seed\n";
  for (const auto& r : rows) {
    out += r.dataset + "," + r.metric + "," + format_double(r.value) + "," + std::to_string(r.seed);
    if (with_tta) out += r.tta.value_or(false) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::optional<double> EvalReport::value(const std::string& dataset, const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.dataset == dataset && r.metric == metric) return r.value;
  }
  return std::nullopt;
}

bool is_known_metric(const std::string& metric) {
  static const std::set<std::string> known = {"accuracy", "map", "precision", "mrr", "recall", "f1"};
  return known.count(metric) > 0;
}

namespace {

double classify_score(const Learner& m, const Dataset& d, const std::string& metric) {
  std::vector<std::vector<double>> emb;
  emb.reserve(d.samples.size());
  for (const auto& s : d.samples) emb.push_back(m.predict(s));
  if (metric == "accuracy") {
    int ok = 0;
    for (std::size_t i = 0; i < emb.size(); ++i) ok += argmax(emb[i]) == d.samples[i].label;
    return static_cast<double>(ok) / static_cast<double>(emb.size());
  }
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (const auto& s : d.samples) {
    ids.push_back(s.id);
    labels.push_back(s.label);
  }
  RetrievalResult r = retrieval_eval(ids, labels, emb);
  if (metric == "map") return r.map;
  if (metric == "precision") return r.precision;
  if (metric == "mrr") return r.mrr;
  throw DataError("metric " + metric + " does not apply to classify datasets");
}

double clone_score(const Learner& m, const Dataset& d, const std::string& metric) {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& s : d.samples) {
    bool pred = m.predict(s).at(0) >= 0.5;
    bool gold = s.label != 0;
    if (pred && gold) ++tp;
    if (pred && !gold) ++fp;
    if (!pred && gold) ++fn;
    if (!pred && !gold) ++tn;
  }
  if (metric == "accuracy") return static_cast<double>(tp + tn) / static_cast<double>(d.samples.size());
  if (tp + fp == 0 || tp + fn == 0) return 0.0;
  Prf p = precision_recall_f1(tp, fp, fn);
  if (metric == "precision") return p.precision;
  if (metric == "recall") return p.recall;
  if (metric == "f1") return p.f1;
  throw DataError("metric " + metric + " does not apply to clone_pair datasets");
}

double search_score(const Learner& m, const Dataset& d, const std::string& metric) {
  std::vector<RankedRetrieval> runs;
  for (const auto& q : d.samples) {
    RankedRetrieval run;
    run.query = q.id;
    run.relevant.insert(q.id);
    std::vector<std::pair<std::string, double>> scored;
    for (const auto& c : d.samples) {
      DatasetSample probe = q;
      probe.code = c.code;
      scored.emplace_back(c.id, m.predict(probe).at(0));
    }
    run.ranked = rank_candidates(std::move(scored));
    runs.push_back(std::move(run));
  }
  if (metric == "mrr") return mean_reciprocal_rank(runs);
  if (metric == "map") return mean_average_precision(runs).value;
  throw DataError("metric " + metric + " does not apply to search_pair datasets");
}

}  // namespace

double score_dataset(const Learner& m, const Dataset& d, const std::string& metric) {
  if (d.samples.empty()) throw DataError("cannot score an empty dataset");
  switch (d.task) {
    case Task::Classify: return classify_score(m, d, metric);
    case Task::ClonePair: return clone_score(m, d, metric);
    case Task::SearchPair: return search_score(m, d, metric);
  }
  return 0.0;
}

EvalReport evaluate_variants(const Learner& m, const std::vector<Dataset>& chain, const std::string& metric,
                             std::uint64_t seed) {
  EvalReport report;
  for (std::size_t t = 0; t < chain.size(); ++t) {
    report.rows.push_back({"D" + std::to_string(t), metric, score_dataset(m, chain[t], metric), seed, std::nullopt});
  }
  return report;
}

std::vector<DifficultyScore> leave_one_out_scores(const Dataset& d, int n_folds, const Learner& prototype,
                                                  std::uint64_t seed, FoldLog* log) {
  if (n_folds < 2) throw DataError("leave-one-out needs at least 2 folds");
  if (d.task != Task::Classify) throw UnknownTask("leave-one-out scoring needs a classify dataset");
  std::vector<std::string> origins;
  std::set<std::string> seen;
  for (const auto& s : d.samples) {
    if (seen.insert(s.origin_id).second) origins.push_back(s.origin_id);
  }
  Rng rng(derive_seed(seed, "folds"));
  rng.shuffle(origins);
  std::map<std::string, int> fold_of;
  for (std::size_t i = 0; i < origins.size(); ++i) fold_of[origins[i]] = static_cast<int>(i % n_folds);

  const int n_classes = d.num_classes();
  std::vector<Dataset> train(static_cast<std::size_t>(n_folds)), held(static_cast<std::size_t>(n_folds));
  for (int f = 0; f < n_folds; ++f) train[f].task = held[f].task = d.task;
  for (const auto& s : d.samples) {
    int f = fold_of.at(s.origin_id);
    for (int g = 0; g < n_folds; ++g) (g == f ? held[g] : train[g]).samples.push_back(s);
  }

  std::vector<std::map<std::string, double>> fold_scores(static_cast<std::size_t>(n_folds));
  std::vector<std::string> errors(static_cast<std::size_t>(n_folds));
  auto run_fold = [&](int f) {
    try {
      if (held[f].samples.empty() || train[f].samples.empty()) return;
      auto model = prototype.fresh();
      model->fit(train[f], nullptr, n_classes);
      for (const auto& s : held[f].samples) {
        auto p = model->predict(s);
        double q = p.at(static_cast<std::size_t>(s.label));
        fold_scores[f][s.id] = -std::log(std::max(q, 1e-12));
      }
    } catch (const std::exception& e) {
      errors[f] = e.what();
    }
  };
  std::vector<std::thread> workers;
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  for (int f = 0; f < n_folds; ++f) {
    workers.emplace_back(run_fold, f);
    if (workers.size() >= hw) {
      for (auto& w : workers) w.join();
      workers.clear();
    }
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw DataError("fold training failed: " + e);
  }

  if (log) {
    log->held_out.assign(static_cast<std::size_t>(n_folds), {});
    log->trained_on.assign(static_cast<std::size_t>(n_folds), {});
    for (int f = 0; f < n_folds; ++f) {
      for (const auto& s : held[f].samples) log->held_out[f].push_back(s.id);
      for (const auto& s : train[f].samples) log->trained_on[f].push_back(s.id);
      if (static_cast<int>(held[f].samples.size()) < n_classes) {
        log->warnings.push_back("FoldTooSmall: fold " + std::to_string(f) + " holds " +
                                std::to_string(held[f].samples.size()) + " samples for " +
                                std::to_string(n_classes) + " classes");
      }
    }
  }

  std::vector<DifficultyScore> out;
  out.reserve(d.samples.size());
  for (const auto& s : d.samples) {
    const auto& scores = fold_scores[fold_of.at(s.origin_id)];
    auto it = scores.find(s.id);
    if (it == scores.end()) throw DataError("sample " + s.id + " was not scored (empty training split)");
    out.push_back({s.id, it->second});
  }
  return out;
}

std::vector<std::pair<int, double>> class_difficulty(const std::vector<DifficultyScore>& scores, const Dataset& d) {
  std::map<std::string, int> label_of;
  for (const auto& s : d.samples) label_of[s.id] = s.label;
  std::map<int, std::pair<double, int>> acc;
  for (const auto& sc : scores) {
    auto it = label_of.find(sc.sample_id);
    if (it == label_of.end()) throw MissingScore("score for unknown sample " + sc.sample_id);
    auto& a = acc[it->second];
    a.first += sc.score;
    a.second += 1;
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [c, a] : acc) out.emplace_back(c, a.first / a.second);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace codeaug
