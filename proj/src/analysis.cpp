#include "starkband/analysis.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>

#include "starkband/error.hpp"

namespace starkband {

namespace {

// Vertex of the parabola through three points, clamped to their span.
std::pair<double, double> parabolic_peak(double t0, double v0, double t1, double v1, double t2,
                                         double v2) {
  const double d01 = (v1 - v0) / (t1 - t0);
  const double d12 = (v2 - v1) / (t2 - t1);
  const double a = (d12 - d01) / (t2 - t0);
  if (!(a < 0.0)) return {t1, v1};
  const double b = d01 - a * (t0 + t1);
  double tp = std::clamp(-b / (2.0 * a), t0, t2);
  const double vp = v1 + (tp - t1) * (d01 + a * (tp - t0));
  return {tp, std::max(vp, v1)};
}

double nearest_image(double d, double force) { return fold_quasi_energy(d, force); }

struct Coeffs {
  std::vector<double> eps;
  std::vector<double> abs_c;
};

Coeffs aggregated(const FloquetSpectrum& s) {
  Coeffs c;
  for (const auto& cl : aggregate_coefficients(s)) {
    c.eps.push_back(cl.quasi_energy);
    c.abs_c.push_back(cl.abs_c());
  }
  return c;
}

}  // namespace

OscillationTrace upper_envelope(const OscillationTrace& trace, double window) {
  if (!(window > 0.0)) throw Error(Errc::invalid_parameter, "envelope window must be > 0");
  if (trace.size() < 2) throw Error(Errc::trace_too_short, "trace has fewer than two samples");
  const double t0 = trace.times.front();
  const double span = trace.times.back() - t0;
  const double windows = span / window;
  if (windows < 3.0 - 1e-9)
    throw Error(Errc::trace_too_short, "trace spans fewer than three envelope windows");

  auto full = static_cast<std::size_t>(std::floor(windows + 1e-9));
  const bool keep_tail = windows - static_cast<double>(full) >= 0.5;
  const std::size_t count = full + (keep_tail ? 1 : 0);

  OscillationTrace env;
  env.meta = trace.meta;
  std::size_t i = 0;
  for (std::size_t w = 0; w < count; ++w) {
    const double end = (w + 1 == count) ? std::numeric_limits<double>::infinity()
                                        : t0 + static_cast<double>(w + 1) * window;
    std::size_t best = i;
    bool any = false;
    for (; i < trace.size() && trace.times[i] < end; ++i) {
      if (!any || trace.values[i] > trace.values[best]) best = i;
      any = true;
    }
    if (!any) continue;
    if (!env.empty() && trace.times[best] <= env.times.back()) continue;
    env.push(trace.times[best], trace.values[best]);
  }
  return env;
}

double interpolate(const OscillationTrace& trace, double t) {
  if (trace.empty()) throw Error(Errc::trace_too_short, "empty trace");
  if (t <= trace.times.front()) return trace.values.front();
  if (t >= trace.times.back()) return trace.values.back();
  const auto it = std::upper_bound(trace.times.begin(), trace.times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - trace.times.begin());
  const double w = (t - trace.times[j - 1]) / (trace.times[j] - trace.times[j - 1]);
  return trace.values[j - 1] + w * (trace.values[j] - trace.values[j - 1]);
}

CollapseResult collapse_time_from_envelope(const OscillationTrace& env) {
  CollapseResult r;
  if (env.empty() || !(env.values.front() > kCollapseThreshold)) {
    r.status = CollapseStatus::never_oscillated;
    return r;
  }
  for (std::size_t i = 1; i < env.size(); ++i) {
    if (env.values[i] < kCollapseThreshold) {
      const double v0 = env.values[i - 1];
      const double v1 = env.values[i];
      const double w = (v0 - kCollapseThreshold) / (v0 - v1);
      r.status = CollapseStatus::collapsed;
      r.time = env.times[i - 1] + w * (env.times[i] - env.times[i - 1]);
      return r;
    }
  }
  r.status = CollapseStatus::never_collapsed;
  return r;
}

CollapseResult collapse_time(const OscillationTrace& trace, double window) {
  return collapse_time_from_envelope(upper_envelope(trace, window));
}

RevivalResult revival_time_from_envelope(const OscillationTrace& env, double t_coll,
                                         double prominence) {
  RevivalResult r;
  std::size_t i = 0;
  while (i < env.size() && env.times[i] <= t_coll) ++i;
  if (i >= env.size()) return r;

  // Rise by `prominence` above the running minimum.
  double floor_v = env.values[i];
  std::size_t start = env.size();
  for (; i < env.size(); ++i) {
    floor_v = std::min(floor_v, env.values[i]);
    if (env.values[i] - floor_v >= prominence) {
      start = i;
      break;
    }
  }
  if (start == env.size()) return r;

  // Climb to the top of this hill; it must fall back by `prominence`.
  std::size_t peak = start;
  bool closed = false;
  for (std::size_t j = start + 1; j < env.size(); ++j) {
    if (env.values[j] > env.values[peak]) peak = j;
    else if (env.values[j] < env.values[peak] - prominence) {
      closed = true;
      break;
    }
  }
  if (!closed) return r;

  r.found = true;
  r.plateau = floor_v;
  r.time = env.times[peak];
  r.peak = env.values[peak];

  const double half = r.plateau + 0.5 * (r.peak - r.plateau);
  std::optional<double> left, right;
  for (std::size_t j = peak; j > 0; --j) {
    if (env.values[j - 1] < half) {
      const double w = (env.values[j] - half) / (env.values[j] - env.values[j - 1]);
      left = env.times[j] - w * (env.times[j] - env.times[j - 1]);
      break;
    }
  }
  for (std::size_t j = peak; j + 1 < env.size(); ++j) {
    if (env.values[j + 1] < half) {
      const double w = (env.values[j] - half) / (env.values[j] - env.values[j + 1]);
      right = env.times[j] + w * (env.times[j + 1] - env.times[j]);
      break;
    }
  }
  if (left && right) r.fwhm = *right - *left;
  return r;
}

RevivalResult revival_time(const OscillationTrace& trace, double window, double t_coll,
                           double prominence) {
  return revival_time_from_envelope(upper_envelope(trace, window), t_coll, prominence);
}

SpectralRevival spectral_revival_estimate(const std::vector<double>& eps,
                                          const std::vector<double>& abs_c, double force,
                                          double floor) {
  if (eps.size() != abs_c.size())
    throw Error(Errc::dimension_mismatch, "quasi-energy and coefficient lists differ");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < abs_c.size(); ++i)
    if (abs_c[i] > 1e-12) idx.push_back(i);
  if (idx.size() < 3)
    throw Error(Errc::insufficient_spectrum, "fewer than three significant coefficients");
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return abs_c[a] > abs_c[b]; });

  const double ref = eps[idx[0]];
  std::array<double, 3> u{};
  for (int k = 0; k < 3; ++k) u[k] = ref + nearest_image(eps[idx[k]] - ref, force);
  std::sort(u.begin(), u.end());

  SpectralRevival s;
  s.quasi_energies = u;
  s.omega_12 = u[1] - u[0];
  s.omega_23 = u[2] - u[1];
  const double d = std::abs(s.omega_23 - s.omega_12);
  if (d >= floor) s.t_rev = 2.0 * std::numbers::pi / d;
  return s;
}

SpectralRevival spectral_revival_estimate(const FloquetSpectrum& spectrum, double floor) {
  const Coeffs c = aggregated(spectrum);
  return spectral_revival_estimate(c.eps, c.abs_c, spectrum.force, floor);
}

std::optional<double> coefficient_width(const std::vector<double>& eps,
                                        const std::vector<double>& abs_c, double force,
                                        std::optional<double> spacing) {
  std::vector<std::size_t> sig;
  for (std::size_t i = 0; i < abs_c.size(); ++i)
    if (abs_c[i] * abs_c[i] > kSignificantWeight) sig.push_back(i);
  if (sig.empty()) return std::nullopt;
  if (sig.size() == 1) return 0.0;
  std::stable_sort(sig.begin(), sig.end(),
                   [&](std::size_t a, std::size_t b) { return abs_c[a] > abs_c[b]; });

  const double ref = eps[sig[0]];
  const double step =
      spacing.value_or(std::abs(nearest_image(eps[sig[1]] - ref, force)));
  if (!(step > kResolutionFloor)) return std::nullopt;

  double wsum = 0.0, mean = 0.0, sq = 0.0;
  for (std::size_t i : sig) {
    const double w = abs_c[i] * abs_c[i];
    const double k = std::round(nearest_image(eps[i] - ref, force) / step);
    wsum += w;
    mean += w * k;
    sq += w * k * k;
  }
  mean /= wsum;
  return std::sqrt(std::max(0.0, sq / wsum - mean * mean));
}

std::optional<double> coefficient_width(const FloquetSpectrum& spectrum,
                                        std::optional<double> spacing) {
  const Coeffs c = aggregated(spectrum);
  return coefficient_width(c.eps, c.abs_c, spectrum.force, spacing);
}

double measured_period(const OscillationTrace& trace, double prominence_fraction) {
  if (trace.size() < 3) throw Error(Errc::period_undefined, "trace too short for a period");
  const auto [lo, hi] = std::minmax_element(trace.values.begin(), trace.values.end());
  const double thr = prominence_fraction * (*hi - *lo);
  if (!(thr > 0.0)) throw Error(Errc::period_undefined, "trace does not oscillate");

  std::vector<double> peaks;
  const auto& v = trace.values;
  const auto& t = trace.times;
  bool seeking_peak = true;
  std::size_t cand = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (seeking_peak) {
      if (v[i] > v[cand]) cand = i;
      else if (v[i] < v[cand] - thr) {
        if (cand > 0 && cand + 1 < v.size()) {
          peaks.push_back(parabolic_peak(t[cand - 1], v[cand - 1], t[cand], v[cand],
                                         t[cand + 1], v[cand + 1]).first);
        }
        seeking_peak = false;
        cand = i;
      }
    } else {
      if (v[i] < v[cand]) cand = i;
      else if (v[i] > v[cand] + thr) {
        seeking_peak = true;
        cand = i;
      }
    }
  }
  if (peaks.size() < 2) throw Error(Errc::period_undefined, "fewer than two maxima");
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

double peak_value(const OscillationTrace& trace) {
  if (trace.empty()) throw Error(Errc::trace_too_short, "empty trace");
  return *std::max_element(trace.values.begin(), trace.values.end());
}

InverseGFit fit_inverse_g(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw Error(Errc::fit_degenerate, "need at least three points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0)) throw Error(Errc::fit_degenerate, "g must be > 0");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].first == points[j].first)
        throw Error(Errc::fit_degenerate, "repeated g values");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [g, t] : points) {
    const double x = 1.0 / g;
    sx += x;
    sy += t;
    sxx += x * x;
    sxy += x * t;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 1e-300)) throw Error(Errc::fit_degenerate, "degenerate abscissas");
  InverseGFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (const auto& [g, t] : points) {
    const double fit = f.slope / g + f.intercept;
    f.max_relative_residual = std::max(f.max_relative_residual, std::abs(t - fit) / std::abs(fit));
  }
  return f;
}

RevivalReport make_revival_report(const OscillationTrace& trace, const FloquetSpectrum& spectrum,
                                  const ModelParams& params, int order, double prominence) {
  RevivalReport r;
  r.t_bloch = spectrum.t_bloch;
  r.unitarity_defect = spectrum.unitarity_defect;
  r.t_res_predicted = resonant_period(params, order);

  OscillationTrace head;
  for (std::size_t i = 0; i < trace.size() && trace.times[i] <= 3.0 * r.t_res_predicted; ++i)
    head.push(trace.times[i], trace.values[i]);
  try {
    r.t_res_measured = measured_period(head);
  } catch (const Error& e) {
    if (e.code() != Errc::period_undefined) throw;
  }
  r.window_measured = r.t_res_measured.has_value();
  r.window = r.t_res_measured.value_or(r.t_res_predicted);

  const OscillationTrace env = upper_envelope(trace, r.window);
  const CollapseResult coll = collapse_time_from_envelope(env);
  r.collapse_status = coll.status;
  if (coll.found()) {
    r.t_coll_measured = coll.time;
    const RevivalResult rev = revival_time_from_envelope(env, coll.time, prominence);
    if (rev.found) {
      r.t_rev_measured = rev.time;
      r.revival_fwhm = rev.fwhm;
      r.ratio = rev.time / coll.time;
    }
  }

  if (params.g * params.w_x > 0.0) r.t_rev_eq9 = revival_estimate_universal(params);
  try {
    const SpectralRevival sr = spectral_revival_estimate(spectrum);
    r.omega_12 = sr.omega_12;
    r.omega_23 = sr.omega_23;
    r.t_rev_eq10 = sr.t_rev;
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_spectrum) throw;
  }
  r.delta_n = coefficient_width(spectrum);
  if (r.t_rev_measured && r.delta_n && *r.delta_n > 0.0)
    r.t_coll_from_width = collapse_from_revival(*r.t_rev_measured, *r.delta_n);
  return r;
}

}  // namespace starkband
