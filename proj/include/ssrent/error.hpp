#pragma once

#include <stdexcept>
#include <string>

namespace ssrent {

enum class ErrorCode {
  mixed_total_number,
  zero_vector,
  sector_out_of_range,
  dimension_mismatch,
  zero_probability_outcome,
  invalid_argument,
  invalid_state,
  scale_exceeded,
  not_a_qubit_state,
  not_direct_sum_of_pure,
  degenerate_block,
  out_of_range,
  index_out_of_range,
  cutoff_too_small,
  frame_not_nonnegative,
  not_normalized,
  parse_error,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssrent
