#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "codeaug/frontend/ast.hpp"

namespace codeaug {

inline constexpr std::uint64_t kDefaultStepLimit = 1'000'000;

struct ExecResult {
  enum class Status { Ok, StepLimit, RuntimeError };

  std::string stdout_bytes;
  Status status = Status::Ok;
  std::string message;  // set for RuntimeError

  bool operator==(const ExecResult&) const = default;
};

const char* status_name(ExecResult::Status s);

/// Runs `main` of a resolved program against `stdin_bytes`.
///
/// Semantics: `int` is 64-bit two's complement with wrap-around, `char` is a
/// signed byte, `double` is binary64. Uninitialized storage reads as zero.
/// Every executed statement (blocks included) counts as one step; exceeding
/// `step_limit` stops with Status::StepLimit and keeps the output so far.
/// `%f` and stream output of doubles both print six fractional digits.
ExecResult run(const Ast& ast, std::string_view stdin_bytes, std::uint64_t step_limit = kDefaultStepLimit);

}  // namespace codeaug
