#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cycleflux {

enum class ErrorCode {
  disconnected_graph,
  invalid_rate,
  dangling_reference,
  duplicate_channel,
  singular_beyond_rank_one,
  cycle_budget_exceeded,
  numerical_underflow,
  absorbing_state,
  missing_annotation,
  non_positive_frequency,
  zero_gap_channel,
  invalid_parameter,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cycleflux
