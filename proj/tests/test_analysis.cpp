#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starkband/analysis.hpp"
#include "starkband/error.hpp"

using namespace starkband;
using std::numbers::pi;

namespace {

template <class F>
OscillationTrace sample(F f, double t_end, double dt, double t0 = 0.0) {
  OscillationTrace tr;
  for (double t = t0; t <= t_end + 1e-12; t += dt) tr.push(t, f(t));
  return tr;
}

// Collapsing and reviving resonant signal: sin^2 carrier with a beat envelope.
double beat(double t, double omega, double delta) {
  return 0.5 - 0.5 * std::cos(omega * t) * std::cos(delta * t);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("upper envelope of simple traces") {
  SUBCASE("constant") {
    const auto env = upper_envelope(sample([](double) { return 0.3; }, 10.0, 0.01), 1.0);
    for (double v : env.values) CHECK(v == doctest::Approx(0.3));
  }
  SUBCASE("sin^2 reaches one in every window") {
    const double omega = 2.0;
    const auto tr = sample([&](double t) { return std::pow(std::sin(omega * t / 2), 2); }, 60.0,
                           0.01);
    const auto env = upper_envelope(tr, 2 * pi / omega);
    for (double v : env.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("decaying beat follows its analytic envelope") {
    const double omega = 2 * pi, delta = 0.05;
    const auto tr = sample([&](double t) { return 0.5 * (1 + std::cos(delta * t)) *
                                                  std::pow(std::sin(omega * t / 2), 2); },
                           60.0, 0.005);
    const auto env = upper_envelope(tr, 1.0);
    for (std::size_t i = 0; i < env.size(); ++i)
      CHECK(env.values[i] ==
            doctest::Approx(0.5 * (1 + std::cos(delta * env.times[i]))).epsilon(0.05));
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(upper_envelope(sample([](double) { return 0.0; }, 2.0, 0.1), 1.0), Error);
  }
}

TEST_CASE("interpolate is piecewise linear and clamped") {
  OscillationTrace tr;
  tr.push(0.0, 0.0);
  tr.push(1.0, 2.0);
  tr.push(3.0, 0.0);
  CHECK(interpolate(tr, 0.5) == doctest::Approx(1.0));
  CHECK(interpolate(tr, 2.0) == doctest::Approx(1.0));
  CHECK(interpolate(tr, -1.0) == 0.0);
  CHECK(interpolate(tr, 9.0) == 0.0);
}

TEST_CASE("collapse threshold crossing") {
  CHECK(kCollapseThreshold == doctest::Approx(0.68394).epsilon(1e-5));
  const auto env = sample([](double t) { return 0.5 + 0.5 * std::exp(-t); }, 5.0, 0.05);
  const CollapseResult c = collapse_time_from_envelope(env);
  CHECK(c.found());
  CHECK(c.time == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("no collapse: undamped and never oscillating") {
  const auto undamped =
      sample([](double t) { return std::pow(std::sin(t / 2), 2); }, 200.0, 0.05);
  CHECK(collapse_time(undamped, 2 * pi).status == CollapseStatus::never_collapsed);
  const auto small = sample([](double t) { return 0.02 * std::pow(std::sin(t / 2), 2); }, 200.0,
                            0.05);
  CHECK(collapse_time(small, 2 * pi).status == CollapseStatus::never_oscillated);
}

TEST_CASE("revival of a synthetic beat at pi / delta") {
  const double omega = 2 * pi, delta = 0.02;
  const auto tr = sample([&](double t) { return beat(t, omega, delta); }, 250.0, 0.01);
  const auto env = upper_envelope(tr, 1.0);
  const CollapseResult c = collapse_time_from_envelope(env);
  REQUIRE(c.found());
  CHECK(c.time == doctest::Approx(std::acos(2 * kCollapseThreshold - 1) / delta).epsilon(0.01));
  const RevivalResult r = revival_time_from_envelope(env, c.time);
  REQUIRE(r.found);
  CHECK(r.time == doctest::Approx(pi / delta).epsilon(0.01));
  CHECK(r.peak == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE(r.fwhm.has_value());
  CHECK(*r.fwhm > 0.0);
}

TEST_CASE("monotone decay has no revival") {
  const auto tr = sample([](double t) {
    return 0.5 + 0.5 * std::exp(-t / 20) * -std::cos(2 * pi * t); }, 300.0, 0.01);
  const auto env = upper_envelope(tr, 1.0);
  const CollapseResult c = collapse_time_from_envelope(env);
  REQUIRE(c.found());
  CHECK_FALSE(revival_time_from_envelope(env, c.time).found);
}

TEST_CASE("collapse and revival are shift invariant and scale equivariant") {
  const double omega = 2 * pi, delta = 0.02;
  const auto base = sample([&](double t) { return beat(t, omega, delta); }, 250.0, 0.01);
  const auto c0 = collapse_time(base, 1.0);
  const auto r0 = revival_time(base, 1.0, c0.time);

  const double shift = 37.0;
  const auto shifted = sample([&](double t) { return beat(t - shift, omega, delta); },
                              250.0 + shift, 0.01, shift);
  const auto c1 = collapse_time(shifted, 1.0);
  CHECK(c1.time == doctest::Approx(c0.time + shift).epsilon(1e-9));
  CHECK(revival_time(shifted, 1.0, c1.time).time == doctest::Approx(r0.time + shift).epsilon(1e-9));

  const double k = 3.0;
  const auto scaled = sample([&](double t) { return beat(t / k, omega, delta); }, 250.0 * k, 0.03);
  const auto c2 = collapse_time(scaled, k);
  CHECK(c2.time == doctest::Approx(k * c0.time).epsilon(1e-9));
  CHECK(revival_time(scaled, k, c2.time).time == doctest::Approx(k * r0.time).epsilon(1e-9));
}

TEST_CASE("spectral revival estimate") {
  SUBCASE("synthetic triplet") {
    const SpectralRevival s = spectral_revival_estimate({0.0, 1.0, 2.1}, {0.5, 0.5, 0.5}, 10.0);
    REQUIRE(s.t_rev.has_value());
    CHECK(*s.t_rev == doctest::Approx(2 * pi / 0.1));
    CHECK(s.omega_12 == doctest::Approx(1.0));
    CHECK(s.omega_23 == doctest::Approx(1.1));
  }
  SUBCASE("equal spacing diverges") {
    CHECK(spectral_revival_estimate({0.0, 1.0, 2.0}, {0.5, 0.5, 0.5}, 10.0).diverges());
  }
  SUBCASE("only the three largest coefficients count") {
    const SpectralRevival s =
        spectral_revival_estimate({0.0, 1.0, 2.1, 3.0}, {0.5, 0.6, 0.55, 0.1}, 10.0);
    CHECK(*s.t_rev == doctest::Approx(2 * pi / 0.1));
  }
  SUBCASE("invariant under a global shift and relabelling") {
    const double ref = *spectral_revival_estimate({0.0, 1.0, 2.1}, {0.4, 0.5, 0.6}, 10.0).t_rev;
    CHECK(*spectral_revival_estimate({2.1 + 0.3, 0.3, 1.3}, {0.6, 0.4, 0.5}, 10.0).t_rev ==
          doctest::Approx(ref));
  }
  SUBCASE("unwrapping across the fold") {
    // -4.6 is the image of 5.4 when F = 10.
    const SpectralRevival s = spectral_revival_estimate({4.4, -4.6, 3.3}, {0.5, 0.5, 0.5}, 10.0);
    REQUIRE(s.t_rev.has_value());
    CHECK(s.omega_12 == doctest::Approx(1.1));
    CHECK(s.omega_23 == doctest::Approx(1.0));
    CHECK(*s.t_rev == doctest::Approx(2 * pi / 0.1));
  }
  SUBCASE("too few coefficients") {
    CHECK_THROWS_AS(spectral_revival_estimate({0.0, 1.0, 2.0}, {0.5, 0.5, 0.0}, 10.0), Error);
  }
}

TEST_CASE("coefficient width") {
  CHECK(*coefficient_width({0.0, 0.1}, {std::sqrt(0.5), std::sqrt(0.5)}, 10.0) ==
        doctest::Approx(0.5));
  CHECK(*coefficient_width({0.3}, {1.0}, 10.0, 0.1) == doctest::Approx(0.0));
  CHECK(*coefficient_width({0.0, 0.1, 0.2}, {0.6, std::sqrt(0.28), 0.6}, 10.0, 0.1) ==
        doctest::Approx(std::sqrt(0.72)));
  CHECK(*coefficient_width({0.3}, {1.0}, 10.0) == 0.0);
  CHECK_FALSE(coefficient_width({0.3, 0.3}, {0.6, 0.8}, 10.0).has_value());
  CHECK_FALSE(coefficient_width({0.3}, {0.001}, 10.0).has_value());
}

TEST_CASE("measured period") {
  const double omega = 0.7;
  const auto tr = sample([&](double t) { return std::pow(std::sin(omega * t / 2), 2); }, 100.0, 0.2);
  CHECK(measured_period(tr) == doctest::Approx(2 * pi / omega).epsilon(0.005));
  CHECK_THROWS_AS(measured_period(sample([](double) { return 0.4; }, 10.0, 0.1)), Error);
  CHECK_THROWS_AS(measured_period(sample([](double t) { return std::sin(t); }, 4.0, 0.1)), Error);
  CHECK(peak_value(tr) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("inverse-g fit") {
  const InverseGFit f = fit_inverse_g({{0.1, 70.0}, {0.2, 35.0}, {0.5, 14.0}});
  CHECK(f.slope == doctest::Approx(7.0));
  CHECK(std::abs(f.intercept) < 1e-10);
  CHECK(f.max_relative_residual < 1e-12);
  CHECK_THROWS_AS(fit_inverse_g({{0.1, 1.0}, {0.1, 2.0}, {0.2, 1.0}}), Error);
  CHECK_THROWS_AS(fit_inverse_g({{0.1, 1.0}, {0.2, 2.0}}), Error);
}

TEST_CASE("revival report on a small system") {
  ModelParams p = preset_v0_4();
  p.g = 0.2;
  p.n_particles = 4;
  p.n_sites = 4;
  const SymmetrySector s = build_k0_sector(4, 4);
  const HamiltonianParts parts = build_interaction_picture(p, s);
  const FloquetOperator uf = floquet_operator(parts);
  FloquetSpectrum sp =
      diagonalize_floquet(uf.u, uf.t_bloch, project_initial_state(UnitFillingLower{}, s));
  sp.unitarity_defect = uf.unitarity_defect;
  const OscillationTrace tr = occupation_series_stroboscopic(sp, s, 8000);
  const RevivalReport r = make_revival_report(tr, sp, p, 2);
  CHECK(r.t_res_predicted == doctest::Approx(resonant_period(p, 2)));
  CHECK(r.window > 0.0);
  CHECK(*r.t_rev_eq9 == doctest::Approx(revival_estimate_universal(p)));
  CHECK(r.t_rev_eq10.has_value());
  CHECK(r.delta_n.has_value());
  if (r.t_coll_measured && r.t_rev_measured) {
    CHECK(*r.t_rev_measured > *r.t_coll_measured);
    CHECK(*r.ratio == doctest::Approx(*r.t_rev_measured / *r.t_coll_measured));
  }
  CHECK(r.unitarity_defect < 1e-8);
}

}  // TEST_SUITE
