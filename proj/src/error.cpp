#include "starkband/error.hpp"

namespace starkband {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::no_resonance: return "no-solution";
    case Errc::infinite_period: return "infinite-period";
    case Errc::no_revival_possible: return "no-revival";
    case Errc::undefined_width: return "undefined-width";
    case Errc::overflow: return "overflow";
    case Errc::dimension_too_large: return "dimension-too-large";
    case Errc::unsupported_descriptor: return "unsupported-descriptor";
    case Errc::projection_vanishes: return "projection-vanishes";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::trace_too_short: return "trace-too-short";
    case Errc::period_undefined: return "period-undefined";
    case Errc::insufficient_spectrum: return "insufficient-spectrum";
    case Errc::fit_degenerate: return "fit-error";
    case Errc::config: return "config";
    case Errc::stiffness: return "stiffness";
    case Errc::integration_failure: return "integration-failure";
    case Errc::unitarity_defect: return "unitarity-defect";
  }
  return "unknown";
}

}  // namespace starkband
