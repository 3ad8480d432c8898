#include "textgcn/error.hpp"

namespace textgcn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::empty_document: return "empty_document";
    case ErrorCode::malformed_graph: return "malformed_graph";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::divergence: return "divergence";
  }
  return "unknown";
}

}  // namespace textgcn
