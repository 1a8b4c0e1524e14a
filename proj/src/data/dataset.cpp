#include "codeaug/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "codeaug/errors.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

using ojson = nlohmann::ordered_json;

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Classify: return "classify";
    case Task::ClonePair: return "clone_pair";
    case Task::SearchPair: return "search_pair";
  }
  return "classify";
}

Task parse_task(std::string_view name) {
  if (name == "classify") return Task::Classify;
  if (name == "clone_pair" || name == "clone") return Task::ClonePair;
  if (name == "search_pair" || name == "search") return Task::SearchPair;
  throw UnknownTask("unknown task: " + std::string(name));
}

std::map<int, std::vector<std::string>> Dataset::class_index() const {
  std::map<int, std::vector<std::string>> out;
  for (const auto& s : samples) out[s.label].push_back(s.id);
  return out;
}

int Dataset::num_classes() const {
  int c = 0;
  for (const auto& s : samples) c = std::max(c, s.label + 1);
  return c;
}

const DatasetSample* Dataset::find(const std::string& id) const {
  for (const auto& s : samples) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

void Dataset::validate() const {
  std::set<std::string> seen;
  for (const auto& s : samples) {
    if (s.task != task) throw DataError("sample " + s.id + " has task " + std::string(task_name(s.task)));
    if (!seen.insert(s.id).second) throw DataError("duplicate sample id: " + s.id);
    if (s.k == 0 && s.origin_id != s.id) throw DataError("original " + s.id + " must be its own origin");
  }
}

namespace {

ojson sample_json(const DatasetSample& s) {
  ojson j;
  j["id"] = s.id;
  switch (s.task) {
    case Task::Classify:
      j["code"] = s.code;
      j["label"] = s.label;
      break;
    case Task::ClonePair:
      j["code_a"] = s.code;
      j["code_b"] = s.code_b;
      j["label"] = s.label;
      break;
    case Task::SearchPair:
      j["query"] = s.query;
      j["code"] = s.code;
      break;
  }
  j["k"] = s.k;
  j["origin_id"] = s.origin_id;
  return j;
}

template <typename T>
T field(const ojson& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError("line " + std::to_string(line) + ": missing field \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError("line " + std::to_string(line) + ": bad field \"" + key + "\"");
  }
}

DatasetSample sample_from(const ojson& j, Task task, int line) {
  DatasetSample s;
  s.task = task;
  s.id = field<std::string>(j, "id", line);
  switch (task) {
    case Task::Classify:
      s.code = field<std::string>(j, "code", line);
      s.label = field<int>(j, "label", line);
      break;
    case Task::ClonePair: {
      s.code = field<std::string>(j, "code_a", line);
      s.code_b = field<std::string>(j, "code_b", line);
      auto it = j.find("label");
      if (it != j.end() && it->is_boolean()) {
        s.label = it->get<bool>() ? 1 : 0;
      } else {
        s.label = field<int>(j, "label", line);
      }
      break;
    }
    case Task::SearchPair:
      s.query = field<std::string>(j, "query", line);
      s.code = field<std::string>(j, "code", line);
      break;
  }
  s.k = j.contains("k") ? field<int>(j, "k", line) : 0;
  s.origin_id = j.contains("origin_id") ? field<std::string>(j, "origin_id", line) : s.id;
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn fn) {
  int line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view l = text.substr(pos, end - pos);
    pos = end + 1;
    if (l.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    ojson j;
    try {
      j = ojson::parse(l);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("line " + std::to_string(line) + ": invalid JSON");
    }
    fn(j, line);
  }
}

}  // namespace

std::string to_jsonl(const Dataset& d) {
  std::string out;
  for (const auto& s : d.samples) {
    out += sample_json(s).dump();
    out += '\n';
  }
  return out;
}

Dataset from_jsonl(std::string_view text, Task task) {
  Dataset d;
  d.task = task;
  for_each_line(text, [&](const ojson& j, int line) { d.samples.push_back(sample_from(j, task, line)); });
  d.validate();
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << bytes;
  if (!out) throw DataError("write failed: " + path);
}

Dataset read_dataset(const std::string& path, Task task) { return from_jsonl(read_file(path), task); }

void write_dataset(const Dataset& d, const std::string& path) { write_file(path, to_jsonl(d)); }

std::string records_to_jsonl(const std::vector<VariantRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    ojson j;
    j["id"] = r.id;
    j["origin_id"] = r.record.origin_id;
    j["side"] = r.side;
    j["seed"] = r.record.seed;
    ojson steps = ojson::array();
    for (const auto& s : r.record.steps) {
      ojson st;
      st["kind"] = std::string(kind_name(s.kind));
      st["path"] = s.path;
      st["seed"] = s.seed;
      steps.push_back(std::move(st));
    }
    j["steps"] = std::move(steps);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<VariantRecord> records_from_jsonl(std::string_view text) {
  std::vector<VariantRecord> out;
  for_each_line(text, [&](const ojson& j, int line) {
    VariantRecord r;
    r.id = field<std::string>(j, "id", line);
    r.side = field<std::string>(j, "side", line);
    r.record.origin_id = field<std::string>(j, "origin_id", line);
    r.record.seed = field<std::uint64_t>(j, "seed", line);
    for (const auto& st : j.at("steps")) {
      TransformStep step;
      auto kind = parse_kind(field<std::string>(st, "kind", line));
      if (!kind) throw DataError("line " + std::to_string(line) + ": unknown transform kind");
      step.kind = *kind;
      step.path = field<std::vector<int>>(st, "path", line);
      step.seed = field<std::uint64_t>(st, "seed", line);
      r.record.steps.push_back(std::move(step));
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::string records_path(const std::string& dataset_path) {
  const std::string ext = ".jsonl";
  if (dataset_path.size() > ext.size() && dataset_path.ends_with(ext)) {
    return dataset_path.substr(0, dataset_path.size() - ext.size()) + ".records.jsonl";
  }
  return dataset_path + ".records.jsonl";
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double test_fraction, std::uint64_t seed) {
  std::set<std::string> test_ids;
  for (const auto& [label, ids] : d.class_index()) {
    std::vector<std::string> order = ids;
    Rng rng(derive_seed(seed, "split:" + std::to_string(label)));
    rng.shuffle(order);
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(order.size()) * test_fraction));
    for (std::size_t i = 0; i < n_test && i < order.size(); ++i) test_ids.insert(order[i]);
  }
  Dataset train, test;
  train.task = test.task = d.task;
  for (const auto& s : d.samples) (test_ids.count(s.id) ? test : train).samples.push_back(s);
  return {std::move(train), std::move(test)};
}

}  // namespace codeaug
