#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "starkband/model.hpp"
#include "starkband/propagation.hpp"
#include "starkband/trace.hpp"

namespace starkband {

// Per-window maxima of the trace, placed at the sample where each maximum
// occurs. Windows start at the first sample; a trailing partial window is
// kept when it spans at least half a window. Needs >= 3 full windows.
OscillationTrace upper_envelope(const OscillationTrace& trace, double window);

// Piecewise-linear evaluation, clamped at the ends.
double interpolate(const OscillationTrace& trace, double t);

// N_b(t_coll) = 1/2 + 1/(2e).
inline const double kCollapseThreshold = 0.5 + 0.5 / std::exp(1.0);

enum class CollapseStatus { collapsed, never_collapsed, never_oscillated };

struct CollapseResult {
  CollapseStatus status = CollapseStatus::never_oscillated;
  double time = 0.0;
  bool found() const { return status == CollapseStatus::collapsed; }
};

CollapseResult collapse_time_from_envelope(const OscillationTrace& envelope);
CollapseResult collapse_time(const OscillationTrace& trace, double window);

inline constexpr double kDefaultProminence = 0.05;

struct RevivalResult {
  bool found = false;
  double time = 0.0;
  double peak = 0.0;     // envelope value at the revival
  double plateau = 0.0;  // lowest envelope value between collapse and revival
  std::optional<double> fwhm;
};

RevivalResult revival_time_from_envelope(const OscillationTrace& envelope, double t_coll,
                                         double prominence = kDefaultProminence);
RevivalResult revival_time(const OscillationTrace& trace, double window, double t_coll,
                           double prominence = kDefaultProminence);

// Three-coefficient beat estimate 2 pi / |omega_23 - omega_12|.
struct SpectralRevival {
  double omega_12 = 0.0;
  double omega_23 = 0.0;
  std::optional<double> t_rev;  // empty when the estimate diverges
  std::array<double, 3> quasi_energies{};  // unwrapped, ascending
  bool diverges() const { return !t_rev.has_value(); }
};

inline constexpr double kResolutionFloor = 1e-12;

SpectralRevival spectral_revival_estimate(const std::vector<double>& quasi_energies,
                                          const std::vector<double>& abs_c, double force,
                                          double floor = kResolutionFloor);
// Works on cluster-aggregated coefficients, so degenerate quasi-energies
// count once.
SpectralRevival spectral_revival_estimate(const FloquetSpectrum& spectrum,
                                          double floor = kResolutionFloor);

inline constexpr double kSignificantWeight = 1e-4;

// |c_n|^2-weighted standard deviation of ladder indices. The ladder origin
// is the largest coefficient; the spacing defaults to the nearest-image gap
// between the two largest coefficients. Empty when no ladder exists.
std::optional<double> coefficient_width(const std::vector<double>& quasi_energies,
                                        const std::vector<double>& abs_c, double force,
                                        std::optional<double> spacing = {});
std::optional<double> coefficient_width(const FloquetSpectrum& spectrum,
                                        std::optional<double> spacing = {});

// Mean spacing of successive maxima, found with hysteresis of
// prominence_fraction * (max - min) and refined parabolically.
double measured_period(const OscillationTrace& trace, double prominence_fraction = 0.5);

// Maximum sample value.
double peak_value(const OscillationTrace& trace);

struct InverseGFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_relative_residual = 0.0;
};

// Least squares t = slope / g + intercept.
InverseGFit fit_inverse_g(const std::vector<std::pair<double, double>>& points);


// Measured and predicted time scales of one collapse-revival run.
struct RevivalReport {
  double t_bloch = 0.0;
  double t_res_predicted = 0.0;
  std::optional<double> t_res_measured;
  double window = 0.0;  // envelope window
  bool window_measured = false;  // false: fell back to t_res_predicted
  CollapseStatus collapse_status = CollapseStatus::never_oscillated;
  std::optional<double> t_coll_measured;
  std::optional<double> t_rev_measured;
  std::optional<double> revival_fwhm;
  std::optional<double> t_rev_eq9;
  std::optional<double> t_rev_eq10;
  std::optional<double> omega_12;
  std::optional<double> omega_23;
  std::optional<double> delta_n;
  std::optional<double> ratio;          // t_rev / t_coll
  std::optional<double> t_coll_from_width;  // t_rev / (pi delta_n^2)
  double unitarity_defect = 0.0;
};

// The envelope window is the period measured over the first three predicted
// resonant periods of the trace, or the predicted period when the trace is
// too damped to show two maxima there.
RevivalReport make_revival_report(const OscillationTrace& trace, const FloquetSpectrum& spectrum,
                                  const ModelParams& params, int order,
                                  double prominence = kDefaultProminence);

}  // namespace starkband
