#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeaug/transform/transform.hpp"

namespace codeaug {

enum class Task { Classify, ClonePair, SearchPair };

std::string_view task_name(Task t);
Task parse_task(std::string_view name);  // throws UnknownTask

/// One labeled unit. Which text fields are used depends on the task:
/// classify uses `code`; clone_pair uses `code` and `code_b`; search_pair
/// uses `query` and `code`.
struct DatasetSample {
  std::string id;
  Task task = Task::Classify;
  std::string code;
  std::string code_b;
  std::string query;
  int label = 0;  // class id, or 0/1 for clone pairs; unused for search pairs
  int k = 0;
  std::string origin_id;
  bool carried = false;  // no transform fired; text equals the parent's

  bool operator==(const DatasetSample&) const = default;
};

struct Dataset {
  Task task = Task::Classify;
  std::vector<DatasetSample> samples;

  /// class id -> sample ids in dataset order (classify only).
  std::map<int, std::vector<std::string>> class_index() const;
  int num_classes() const;  // 1 + largest label
  const DatasetSample* find(const std::string& id) const;

  /// Throws DataError on duplicate ids or mixed tasks.
  void validate() const;
};

/// Lineage of one variant: which side of a pair was rewritten and the steps
/// from the origin text.
struct VariantRecord {
  std::string id;
  std::string side = "code";  // "code", "code_a" or "code_b"
  TransformRecord record;
};

std::string to_jsonl(const Dataset& d);
Dataset from_jsonl(std::string_view text, Task task);
Dataset read_dataset(const std::string& path, Task task);
void write_dataset(const Dataset& d, const std::string& path);

std::string records_to_jsonl(const std::vector<VariantRecord>& records);
std::vector<VariantRecord> records_from_jsonl(std::string_view text);

/// `out.jsonl` -> `out.records.jsonl`.
std::string records_path(const std::string& dataset_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

/// Deterministic stratified split of a classify dataset: each class is
/// shuffled and its first round(n * test_fraction) samples go to test.
/// Returns (train, test), both in original dataset order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double test_fraction, std::uint64_t seed);

}  // namespace codeaug
