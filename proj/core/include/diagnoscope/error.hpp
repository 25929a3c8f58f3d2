#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diagnoscope {

enum class ErrorCode {
  unknown_atom,
  undefined_observable,
  inconsistent_scenario,
  observation_unexplainable,
  negative_observation,
  zero_probability,
  hypothesis_space_too_large,
  treatment_space_too_large,
  no_finite_threshold,
  invalid_argument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain failure raised by the reasoning engines. Callers that need to
/// distinguish failure modes switch on code(); what() carries a message
/// suitable for end users.
class DiagnosisError : public std::runtime_error {
 public:
  DiagnosisError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace diagnoscope
