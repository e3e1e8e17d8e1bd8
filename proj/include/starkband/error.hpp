#pragma once

#include <stdexcept>
#include <string>

namespace starkband {

// Failure conditions raised as exceptions. Outcomes that are legitimate
// physics results (no collapse, no revival, diverging estimate) are not
// errors and are reported through return values instead.
enum class Errc {
  invalid_parameter,
  no_resonance,
  infinite_period,
  no_revival_possible,
  undefined_width,
  overflow,
  dimension_too_large,
  unsupported_descriptor,
  projection_vanishes,
  dimension_mismatch,
  trace_too_short,
  period_undefined,
  insufficient_spectrum,
  fit_degenerate,
  config,
  // numerical failures
  stiffness,
  integration_failure,
  unitarity_defect,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

  // Numerical failures map to exit status 3, everything else to 2.
  bool numerical() const {
    return code_ == Errc::stiffness || code_ == Errc::integration_failure ||
           code_ == Errc::unitarity_defect;
  }

 private:
  Errc code_;
};

}  // namespace starkband
