#include "apec/error.hpp"

namespace apec {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "INVALID_INPUT";
    case ErrorCode::resolution: return "RESOLUTION_GUARD";
    case ErrorCode::insufficient_data: return "RADIUS_GUARD";
    case ErrorCode::undefined_quantity: return "UNDEFINED_QUANTITY";
    case ErrorCode::resource: return "RESOURCE_CAP";
    case ErrorCode::cps_singular: return "CPS_SINGULAR";
    case ErrorCode::config: return "CONFIG_INVALID";
  }
  return "UNKNOWN";
}

}  // namespace apec
