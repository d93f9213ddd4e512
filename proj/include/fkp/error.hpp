#pragma once

#include <stdexcept>
#include <string>

namespace fkp {

enum class ErrorCode {
  invalid_argument,
  invalid_field,
  symmetry_violation,
  dimension_mismatch,
  unsupported_equation,
  degenerate_iterate,
  divergence,
  out_of_range,
  invalid_exponent,
  io_failure,
  magic_mismatch,
  version_mismatch,
  truncated_file,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fkp
