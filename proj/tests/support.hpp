#pragma once

#include <string>
#include <vector>

#include "codeaug/experiments.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/interp/interpreter.hpp"

namespace testing_support {

// The shipped desk corpus, generated once per test binary.
inline const codeaug::Dataset& shipped_corpus() {
  static const codeaug::Dataset d = codeaug::corpus_dataset(8, 40, 17);
  return d;
}

inline std::string run_out(const std::string& src, const std::string& in = "") {
  return codeaug::run(codeaug::parse(src), in).stdout_bytes;
}

}  // namespace testing_support
