#include "rotsym/error.hpp"

namespace rotsym {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid_dimension";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::near_pole: return "near_pole";
    case ErrorCode::undefined_mean: return "undefined_mean";
    case ErrorCode::ambiguous_axis: return "ambiguous_axis";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::invalid_shape: return "invalid_shape";
    case ErrorCode::unsupported_angular_function: return "unsupported_angular_function";
    case ErrorCode::config: return "config";
    case ErrorCode::degenerate_cosines: return "degenerate_cosines";
    case ErrorCode::undefined_d_hat: return "undefined_d_hat";
    case ErrorCode::singular_information: return "singular_information";
    case ErrorCode::degenerate_cross_information: return "degenerate_cross_information";
    case ErrorCode::divergent_functional: return "divergent_functional";
    case ErrorCode::invalid_perturbation: return "invalid_perturbation";
    case ErrorCode::unsupported_method: return "unsupported_method";
    case ErrorCode::experiment: return "experiment";
    case ErrorCode::data: return "data";
  }
  return "unknown";
}

}  // namespace rotsym
