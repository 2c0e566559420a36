#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ppdepth {

// Every failure the library can raise. Codes matter more than messages:
// the C API and the CLI map them to their own status values.
enum class ErrorCode {
  invalid_argument,
  parse_error,
  io_error,
  domain_mismatch,
  invalid_rate,
  invalid_intensity,
  cap_exceeded,
  empty_dataset,
  empty_realization,
  non_monotone_means,
  pool_empty,
  missing_cardinality,
  dimension_mismatch,
  insufficient_data,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ppdepth
