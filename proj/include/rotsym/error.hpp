#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotsym {

/// Machine-readable failure categories. The CLI maps these onto exit codes.
enum class ErrorCode {
  invalid_dimension,
  invalid_argument,
  domain,
  overflow,
  near_pole,
  undefined_mean,
  ambiguous_axis,
  insufficient_data,
  normalization,
  invalid_shape,
  unsupported_angular_function,
  config,
  degenerate_cosines,
  undefined_d_hat,
  singular_information,
  degenerate_cross_information,
  divergent_functional,
  invalid_perturbation,
  unsupported_method,
  experiment,
  data,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rotsym
