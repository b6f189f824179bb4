#pragma once

#include <stdexcept>
#include <string>

namespace matlog {

// Failure taxonomy shared by the C++ core and the C API. Domain errors describe
// inputs outside an operation's contract; numerical_failure means the input was
// admissible but a certified result could not be produced.
enum class errc {
  invalid_argument,
  dimension_mismatch,
  singular,
  not_contractive,
  singular_spectrum,
  spectrum_on_ray,
  non_positive_determinant,
  non_negative_determinant,
  odd_parity,
  parity_violation,
  numerical_failure,
};

// Stable names; these appear verbatim in CLI reports and error messages.
inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument:          return "InvalidArgument";
    case errc::dimension_mismatch:        return "DimensionMismatch";
    case errc::singular:                  return "Singular";
    case errc::not_contractive:           return "NotContractive";
    case errc::singular_spectrum:         return "SingularSpectrum";
    case errc::spectrum_on_ray:           return "SpectrumOnRay";
    case errc::non_positive_determinant:  return "NonPositiveDeterminant";
    case errc::non_negative_determinant:  return "NonNegativeDeterminant";
    case errc::odd_parity:                return "OddParity";
    case errc::parity_violation:          return "ParityViolation";
    case errc::numerical_failure:         return "NumericalFailure";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace matlog
