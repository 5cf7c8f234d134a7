#include "ssrent/error.hpp"

namespace ssrent {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::mixed_total_number: return "MixedTotalNumber";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::sector_out_of_range: return "SectorOutOfRange";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::zero_probability_outcome: return "ZeroProbabilityOutcome";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_state: return "InvalidState";
    case ErrorCode::scale_exceeded: return "ScaleExceeded";
    case ErrorCode::not_a_qubit_state: return "NotAQubitState";
    case ErrorCode::not_direct_sum_of_pure: return "NotDirectSumOfPure";
    case ErrorCode::degenerate_block: return "DegenerateBlock";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::cutoff_too_small: return "CutoffTooSmall";
    case ErrorCode::frame_not_nonnegative: return "FrameNotNonnegative";
    case ErrorCode::not_normalized: return "NotNormalized";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ssrent
