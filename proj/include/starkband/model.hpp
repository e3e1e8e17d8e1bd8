#pragma once

#include <optional>
#include <string>

namespace starkband {

// Coefficients of the tilted two-band Bose-Hubbard Hamiltonian. Energies in
// recoil units, hbar = 1, so times are inverse recoil energies.
struct ModelParams {
  double delta = 0.0;   // band gap
  double c0 = 0.0;      // dimensionless inter-band coupling
  double t_a = 0.0;     // lower-band hopping
  double t_b = 0.0;     // upper-band hopping
  double w_a = 0.0;     // lower-band on-site interaction
  double w_b = 0.0;     // upper-band on-site interaction
  double w_x = 0.0;     // inter-band interaction
  double g = 0.0;       // interaction scale, multiplies every W term
  double force = 0.0;   // Stark force F
  int n_particles = 1;  // N
  int n_sites = 2;      // L, sites per band

  // Throws Error(invalid_parameter) when an invariant is violated.
  void validate() const;

  // One-line JSON rendering, used as the parameter fingerprint in outputs.
  std::string fingerprint() const;
};

ModelParams preset_v0_4();

struct DerivedScales {
  double t_bloch = 0.0;      // 2 pi / F
  double delta_tilde = 0.0;  // sqrt(delta^2 + 4 c0^2 F^2)
  double x_a = 0.0;
  double x_b = 0.0;
  double delta_x = 0.0;
  double rabi_period = 0.0;  // 2 pi / delta_tilde
  // Resonant two-level quantities for the requested order; infinite period
  // and zero frequency when the coupling vanishes.
  int order = 0;
  double resonant_period = 0.0;
  double omega_res = 0.0;
};

DerivedScales derive_scales(const ModelParams& p, std::optional<int> order = {});

double delta_tilde(const ModelParams& p);
double bloch_period(const ModelParams& p);

// Nearest resonance order round(delta_tilde / F), at least 1.
int nearest_resonance_order(const ModelParams& p);

// Force solving sqrt(delta^2 + 4 c0^2 F^2) = r F.
double resonant_force(double delta, double c0, int r);

// Off-resonant Rabi prefactor [1 + delta_tilde^2 / (4 c0^2 F^2)]^-1, written
// without the division so that c0 = 0 yields exactly zero.
double rabi_amplitude(const ModelParams& p);
double rabi_occupation(double t, const ModelParams& p);

// pi / |c0 F J_r(delta_x)|.
double resonant_period(const ModelParams& p, int r);

// 4 pi / (g W_x J0^2(x_a) J0^2(x_b)).
double revival_estimate_universal(const ModelParams& p);

// t_rev / (pi delta_n^2).
double collapse_from_revival(double t_rev, double delta_n);

}  // namespace starkband
