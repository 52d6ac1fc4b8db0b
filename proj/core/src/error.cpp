#include "cycleflux/error.hpp"

namespace cycleflux {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::disconnected_graph: return "DisconnectedGraph";
    case ErrorCode::invalid_rate: return "InvalidRate";
    case ErrorCode::dangling_reference: return "DanglingReference";
    case ErrorCode::duplicate_channel: return "DuplicateChannel";
    case ErrorCode::singular_beyond_rank_one: return "SingularBeyondRankOne";
    case ErrorCode::cycle_budget_exceeded: return "CycleBudgetExceeded";
    case ErrorCode::numerical_underflow: return "NumericalUnderflow";
    case ErrorCode::absorbing_state: return "AbsorbingState";
    case ErrorCode::missing_annotation: return "MissingAnnotation";
    case ErrorCode::non_positive_frequency: return "NonPositiveFrequency";
    case ErrorCode::zero_gap_channel: return "ZeroGapChannel";
    case ErrorCode::invalid_parameter: return "InvalidParameter";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace cycleflux
