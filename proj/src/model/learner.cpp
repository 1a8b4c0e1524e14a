#include "codeaug/model/learner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "codeaug/errors.hpp"
#include "codeaug/frontend/lexer.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

std::string_view feature_name(FeatureKind f) {
  switch (f) {
    case FeatureKind::Unigram: return "token_unigram";
    case FeatureKind::Bigram: return "token_bigram";
    case FeatureKind::Both: return "both";
  }
  return "both";
}

FeatureKind parse_feature(std::string_view name) {
  if (name == "token_unigram" || name == "unigram") return FeatureKind::Unigram;
  if (name == "token_bigram" || name == "bigram") return FeatureKind::Bigram;
  if (name == "both") return FeatureKind::Both;
  throw DataError("unknown feature kind: " + std::string(name));
}

std::string_view pace_unit_name(PaceUnit u) { return u == PaceUnit::Batch ? "batch" : "epoch"; }

PaceUnit parse_pace_unit(std::string_view name) {
  if (name == "epoch") return PaceUnit::Epoch;
  if (name == "batch") return PaceUnit::Batch;
  throw DataError("unknown pace unit: " + std::string(name));
}

void LearnerConfig::validate() const {
  if (vocab_cap < 1) throw DataError("vocab_cap must be at least 1");
  if (epochs < 1) throw DataError("epochs must be at least 1");
  if (batch < 1) throw DataError("batch must be at least 1");
  if (!(learning_rate > 0)) throw DataError("learning rate must be positive");
  if (!(l2 >= 0)) throw DataError("l2 must be nonnegative");
}

int ModelState::n_features() const {
  int v = static_cast<int>(vocab.size());
  return task == Task::Classify ? v : 2 * v;
}

int argmax(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

namespace {

std::vector<std::string> token_strings(std::string_view text, bool is_query) {
  std::vector<std::string> out;
  if (is_query) {
    std::string w;
    for (char c : text) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!w.empty()) {
        out.push_back(std::move(w));
        w.clear();
      }
    }
    if (!w.empty()) out.push_back(std::move(w));
    return out;
  }
  for (const auto& t : tokenize(text)) {
    switch (t.kind) {
      case Token::Kind::End: break;
      case Token::Kind::IntLit: out.push_back("#i" + t.text); break;
      case Token::Kind::FloatLit: out.push_back("#f" + t.text); break;
      case Token::Kind::CharLit: out.push_back("#c" + t.text); break;
      case Token::Kind::StringLit: out.push_back("#s" + t.text); break;
      default: out.push_back(t.text); break;
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> ngram_hashes(std::string_view text, FeatureKind feature, bool is_query) {
  auto toks = token_strings(text, is_query);
  std::vector<std::uint64_t> out;
  if (feature != FeatureKind::Bigram) {
    for (const auto& t : toks) out.push_back(fnv1a("u:" + t));
  }
  if (feature != FeatureKind::Unigram) {
    for (std::size_t i = 1; i < toks.size(); ++i) out.push_back(fnv1a("b:" + toks[i - 1] + "\x1f" + toks[i]));
  }
  return out;
}

SparseVec featurize(const std::vector<std::uint64_t>& hashes, const std::map<std::uint64_t, int>& index) {
  std::map<int, double> counts;
  for (auto h : hashes) {
    auto it = index.find(h);
    if (it != index.end()) counts[it->second] += 1.0;
  }
  SparseVec v;
  double norm = 0;
  for (const auto& [i, c] : counts) {
    double x = std::log1p(c);
    v.emplace_back(i, x);
    norm += x * x;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& [i, x] : v) x /= norm;
  }
  return v;
}

namespace {

std::map<std::uint64_t, int> vocab_index(const std::vector<std::uint64_t>& vocab) {
  std::map<std::uint64_t, int> idx;
  for (std::size_t i = 0; i < vocab.size(); ++i) idx.emplace(vocab[i], static_cast<int>(i));
  return idx;
}

// Elementwise product in columns [0, F) and absolute difference in [F, 2F).
SparseVec pair_features(const SparseVec& a, const SparseVec& b, int F) {
  SparseVec prod, diff;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      diff.emplace_back(F + a[i].first, std::abs(a[i].second));
      ++i;
    } else if (i >= a.size() || b[j].first < a[i].first) {
      diff.emplace_back(F + b[j].first, std::abs(b[j].second));
      ++j;
    } else {
      prod.emplace_back(a[i].first, a[i].second * b[j].second);
      double d = std::abs(a[i].second - b[j].second);
      if (d > 0) diff.emplace_back(F + a[i].first, d);
      ++i;
      ++j;
    }
  }
  prod.insert(prod.end(), diff.begin(), diff.end());
  return prod;
}

struct Example {
  SparseVec x;
  int y = 0;
};

void logits(const ModelState& m, const SparseVec& x, std::vector<double>& z) {
  const int F = m.n_features();
  z.assign(static_cast<std::size_t>(m.n_classes), 0.0);
  for (int c = 0; c < m.n_classes; ++c) {
    const double* w = m.weights.data() + static_cast<std::ptrdiff_t>(c) * F;
    double s = m.bias[static_cast<std::size_t>(c)];
    for (const auto& [i, v] : x) s += w[i] * v;
    z[static_cast<std::size_t>(c)] = s;
  }
}

void softmax_inplace(std::vector<double>& z) {
  double mx = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (auto& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : z) v /= sum;
}

std::vector<double> probabilities(const ModelState& m, const SparseVec& x) {
  std::vector<double> z;
  logits(m, x, z);
  softmax_inplace(z);
  return z;
}

// Texts whose n-grams feed the vocabulary and the example features.
struct Featurizer {
  const ModelState& m;
  std::map<std::uint64_t, int> index;

  explicit Featurizer(const ModelState& model) : m(model), index(vocab_index(model.vocab)) {}

  SparseVec code(const std::string& text) const { return featurize(ngram_hashes(text, m.cfg.feature), index); }
  SparseVec query(const std::string& text) const {
    return featurize(ngram_hashes(text, m.cfg.feature, true), index);
  }
  SparseVec sample(const DatasetSample& s, const std::string* other_code = nullptr) const {
    int V = static_cast<int>(m.vocab.size());
    switch (m.task) {
      case Task::Classify: return code(s.code);
      case Task::ClonePair: return pair_features(code(s.code), code(s.code_b), V);
      case Task::SearchPair: return pair_features(query(s.query), code(other_code ? *other_code : s.code), V);
    }
    return {};
  }
};

std::vector<std::uint64_t> build_vocab(const Dataset& d, const LearnerConfig& cfg) {
  std::unordered_map<std::uint64_t, int> df;
  auto add = [&](std::vector<std::uint64_t> hs) {
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    for (auto h : hs) ++df[h];
  };
  for (const auto& s : d.samples) {
    switch (d.task) {
      case Task::Classify: add(ngram_hashes(s.code, cfg.feature)); break;
      case Task::ClonePair:
        add(ngram_hashes(s.code, cfg.feature));
        add(ngram_hashes(s.code_b, cfg.feature));
        break;
      case Task::SearchPair:
        add(ngram_hashes(s.query, cfg.feature, true));
        add(ngram_hashes(s.code, cfg.feature));
        break;
    }
  }
  std::vector<std::pair<std::uint64_t, int>> items(df.begin(), df.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > static_cast<std::size_t>(cfg.vocab_cap)) items.resize(static_cast<std::size_t>(cfg.vocab_cap));
  std::vector<std::uint64_t> vocab;
  vocab.reserve(items.size());
  for (const auto& [h, c] : items) vocab.push_back(h);
  return vocab;
}

}  // namespace

ModelState train(const Dataset& d, const LearnerConfig& cfg, const CurriculumSchedule* schedule, int n_classes) {
  cfg.validate();
  if (d.samples.empty()) throw EmptySubset("training set is empty");
  ModelState m;
  m.task = d.task;
  m.cfg = cfg;
  m.n_classes = d.task == Task::Classify ? std::max(n_classes, d.num_classes()) : 2;
  m.vocab = build_vocab(d, cfg);
  const int F = m.n_features();
  m.weights.assign(static_cast<std::size_t>(m.n_classes) * static_cast<std::size_t>(F), 0.0);
  m.bias.assign(static_cast<std::size_t>(m.n_classes), 0.0);

  Featurizer fz(m);
  Rng rng(derive_seed(cfg.seed, "train"));
  // Examples grouped by sample index; search pairs add one sampled negative.
  std::vector<std::vector<Example>> per_sample(d.samples.size());
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const auto& s = d.samples[i];
    pos.emplace(s.id, i);
    if (d.task == Task::SearchPair) {
      per_sample[i].push_back({fz.sample(s), 1});
      if (d.samples.size() > 1) {
        std::size_t j = (i + 1 + rng.below(d.samples.size() - 1)) % d.samples.size();
        per_sample[i].push_back({fz.sample(s, &d.samples[j].code), 0});
      }
    } else {
      per_sample[i].push_back({fz.sample(s), s.label});
    }
  }

  std::size_t n_examples = 0;
  for (const auto& ex : per_sample) n_examples += ex.size();
  const auto batch = static_cast<std::size_t>(cfg.batch);
  const std::size_t batches_per_epoch = (n_examples + batch - 1) / batch;

  CurriculumSchedule sched;
  std::vector<std::size_t> ordered;
  if (schedule) {
    sched = *schedule;
    sched.pacing.total_steps = cfg.pace_unit == PaceUnit::Batch
                                   ? std::max(1, cfg.epochs * static_cast<int>(batches_per_epoch) - 1)
                                   : std::max(1, cfg.epochs - 1);
    if (sched.ordering.size() != d.samples.size()) throw DataError("schedule does not cover the training set");
    for (const auto& id : sched.ordering) {
      auto it = pos.find(id);
      if (it == pos.end()) throw DataError("schedule names unknown sample " + id);
      ordered.push_back(it->second);
    }
    if (subset_size(sched.pacing, 0, sched.ordering.size()) == 0) {
      throw EmptySubset("pacing admits no samples at step 0");
    }
  }

  const double lr = cfg.learning_rate;
  std::vector<double> z;
  std::vector<std::pair<const Example*, std::vector<double>>> deltas;
  auto update = [&](const std::vector<const Example*>& examples, std::size_t start, std::size_t end) {
    double scale = lr / static_cast<double>(end - start);
    deltas.clear();
    for (std::size_t e = start; e < end; ++e) {
      logits(m, examples[e]->x, z);
      softmax_inplace(z);
      z[static_cast<std::size_t>(examples[e]->y)] -= 1.0;
      deltas.emplace_back(examples[e], z);
    }
    double decay = 1.0 - lr * cfg.l2;
    if (decay != 1.0) {
      for (auto& w : m.weights) w *= decay;
    }
    for (const auto& [ex, g] : deltas) {
      for (int c = 0; c < m.n_classes; ++c) {
        double gc = g[static_cast<std::size_t>(c)] * scale;
        if (gc == 0) continue;
        double* w = m.weights.data() + static_cast<std::ptrdiff_t>(c) * F;
        for (const auto& [i, v] : ex->x) w[i] -= gc * v;
        m.bias[static_cast<std::size_t>(c)] -= gc;
      }
    }
  };

  if (schedule && cfg.pace_unit == PaceUnit::Batch) {
    const int steps = cfg.epochs * static_cast<int>(batches_per_epoch);
    std::vector<const Example*> examples;
    for (int step = 0; step < steps; ++step) {
      std::size_t k = subset_size(sched.pacing, step, ordered.size());
      examples.clear();
      while (examples.size() < batch) {
        const auto& ex = per_sample[ordered[rng.below(k)]];
        for (const auto& e : ex) examples.push_back(&e);
      }
      update(examples, 0, examples.size());
    }
    return m;
  }

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<const Example*> examples;
    if (schedule) {
      std::size_t k = subset_size(sched.pacing, epoch, ordered.size());
      for (std::size_t j = 0; j < k; ++j) {
        for (const auto& e : per_sample[ordered[j]]) examples.push_back(&e);
      }
    } else {
      for (const auto& ex : per_sample) {
        for (const auto& e : ex) examples.push_back(&e);
      }
    }
    rng.shuffle(examples);
    for (std::size_t start = 0; start < examples.size(); start += batch) {
      update(examples, start, std::min(examples.size(), start + batch));
    }
  }
  return m;
}

std::vector<double> predict(const ModelState& m, const DatasetSample& s) {
  if (s.task != m.task) {
    throw UnknownTask("model trained for " + std::string(task_name(m.task)) + " got a " +
                      std::string(task_name(s.task)) + " sample");
  }
  if (m.n_classes == 0) throw DataError("model is untrained");
  Featurizer fz(m);
  auto p = probabilities(m, fz.sample(s));
  if (m.task == Task::Classify) return p;
  return {p[1]};
}

double mean_loss(const ModelState& m, const Dataset& d) {
  if (d.samples.empty()) return 0.0;
  double sum = 0;
  for (const auto& s : d.samples) {
    auto p = predict(m, s);
    double q = s.label < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(s.label)] : 0.0;
    sum += -std::log(std::max(q, 1e-12));
  }
  return sum / static_cast<double>(d.samples.size());
}

namespace {

constexpr char kMagic[8] = {'C', 'A', 'U', 'G', 'M', 'D', 'L', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  template <typename T>
  void put(const T& v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw DataError("model file truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const ModelState& m) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(kFormatVersion);
  w.put(static_cast<std::uint8_t>(m.task));
  w.put(static_cast<std::uint8_t>(m.cfg.feature));
  w.put(static_cast<std::int32_t>(m.cfg.vocab_cap));
  w.put(m.cfg.learning_rate);
  w.put(static_cast<std::int32_t>(m.cfg.epochs));
  w.put(static_cast<std::int32_t>(m.cfg.batch));
  w.put(m.cfg.l2);
  w.put(m.cfg.seed);
  w.put(static_cast<std::uint8_t>(m.cfg.pace_unit));
  w.put(static_cast<std::int32_t>(m.n_classes));
  w.put(static_cast<std::uint64_t>(m.vocab.size()));
  for (auto h : m.vocab) w.put(h);
  for (double x : m.weights) w.put(x);
  for (double x : m.bias) w.put(x);
  return w.take();
}

ModelState deserialize(std::string_view bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<char>() != c) throw DataError("not a model file");
  }
  auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) throw DataError("unsupported model format version " + std::to_string(version));
  ModelState m;
  auto task = r.get<std::uint8_t>();
  auto feature = r.get<std::uint8_t>();
  if (task > 2 || feature > 2) throw DataError("corrupt model header");
  m.task = static_cast<Task>(task);
  m.cfg.feature = static_cast<FeatureKind>(feature);
  m.cfg.vocab_cap = r.get<std::int32_t>();
  m.cfg.learning_rate = r.get<double>();
  m.cfg.epochs = r.get<std::int32_t>();
  m.cfg.batch = r.get<std::int32_t>();
  m.cfg.l2 = r.get<double>();
  m.cfg.seed = r.get<std::uint64_t>();
  auto unit = r.get<std::uint8_t>();
  if (unit > 1) throw DataError("corrupt model header");
  m.cfg.pace_unit = static_cast<PaceUnit>(unit);
  m.n_classes = r.get<std::int32_t>();
  auto v = r.get<std::uint64_t>();
  if (m.n_classes < 0 || v > (1u << 26)) throw DataError("corrupt model header");
  m.vocab.resize(v);
  for (auto& h : m.vocab) h = r.get<std::uint64_t>();
  m.weights.resize(static_cast<std::size_t>(m.n_classes) * static_cast<std::size_t>(m.n_features()));
  for (auto& x : m.weights) x = r.get<double>();
  m.bias.resize(static_cast<std::size_t>(m.n_classes));
  for (auto& x : m.bias) x = r.get<double>();
  if (!r.done()) throw DataError("trailing bytes in model file");
  for (double x : m.weights) {
    if (!std::isfinite(x)) throw DataError("model has non-finite weights");
  }
  return m;
}

void save_model(const ModelState& m, const std::string& path) { write_file(path, serialize(m)); }

ModelState load_model(const std::string& path) { return deserialize(read_file(path)); }

void MemorizingLearner::fit(const Dataset& d, const CurriculumSchedule*, int n_classes) {
  if (d.task != Task::Classify) throw UnknownTask("memorizing learner supports classify only");
  n_classes_ = std::max(n_classes, d.num_classes());
  table_.clear();
  for (const auto& s : d.samples) {
    auto& row = table_[s.code];
    row.resize(static_cast<std::size_t>(n_classes_), 0.0);
    row[static_cast<std::size_t>(s.label)] += 1.0;
  }
  for (auto& [code, row] : table_) {
    double sum = 0;
    for (double x : row) sum += x;
    for (double& x : row) x /= sum;
  }
}

std::vector<double> MemorizingLearner::predict(const DatasetSample& s) const {
  if (s.task != Task::Classify) throw UnknownTask("memorizing learner supports classify only");
  auto it = table_.find(s.code);
  if (it != table_.end()) return it->second;
  return std::vector<double>(static_cast<std::size_t>(n_classes_), 1.0 / std::max(1, n_classes_));
}

}  // namespace codeaug
