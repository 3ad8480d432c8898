#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace textgcn {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  io,
  parse,
  empty_document,
  malformed_graph,
  non_finite,
  divergence,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace textgcn
