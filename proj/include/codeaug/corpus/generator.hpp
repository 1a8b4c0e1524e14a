#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codeaug/util/rng.hpp"

namespace codeaug {

/// Number of distinct algorithm templates. Class c uses template c % count;
/// classes past the first round reuse a template with a different output
/// scaling constant so they remain distinguishable.
int template_count();
std::string template_name(int class_id);

struct GeneratedProgram {
  std::string id;
  int label = 0;
  std::string code;
};

/// One program of class `class_id` with randomized identifiers, literals and
/// surface style (IO API, loop form, braces, declaration grouping, helpers).
std::string generate_program(int class_id, Rng& rng);

/// `per_class` programs for each of `n_classes` classes, class-major order.
/// Every program is checked to run to completion on sample inputs.
std::vector<GeneratedProgram> generate_corpus(int n_classes, int per_class, std::uint64_t seed);

/// Test input in the shared format every generated program reads: a count
/// n in [1, 10] on the first line, then n integers.
std::string random_input(Rng& rng);

/// `count` deterministic inputs for a sample id; the first is a fixed edge
/// case with n = 1.
std::vector<std::string> oracle_inputs(const std::string& sample_id, std::uint64_t seed, int count);

}  // namespace codeaug
