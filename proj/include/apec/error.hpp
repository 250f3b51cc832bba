#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apec {

enum class ErrorCode {
  invalid_input,
  resolution,
  insufficient_data,
  undefined_quantity,
  resource,
  cps_singular,
  config,
};

// Stable identifier used in machine-readable error reports.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace apec
