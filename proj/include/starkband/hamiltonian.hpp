#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "starkband/fock.hpp"
#include "starkband/model.hpp"

namespace starkband {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

// Per-term switches for the two-band Hamiltonian.
struct TermMask {
  bool hop_a = true;
  bool hop_b = true;
  bool coupling_c0 = true;
  bool int_a = true;
  bool int_b = true;
  bool int_x_density = true;
  bool int_x_pair = true;
  bool tilt = true;  // static form only

  static TermMask all() { return {}; }
  // Every single-particle term plus only 2 g W_x n^a n^b.
  static TermMask density_cross_only();
  // Comma list of hop_a,hop_b,c0,int_a,int_b,int_x_density,int_x_pair (and
  // optionally tilt); "all" selects everything.
  static TermMask parse(const std::string& text);
  std::string to_string() const;
  bool any() const;
};

// H(t) = h_static + e^{iFt} h_hop + e^{-iFt} h_hop^dagger on the kappa = 0
// sector of the ring.
struct HamiltonianParts {
  SparseMatrix h_static;
  SparseMatrix h_hop;      // a+_{l+1} a_l (-t_a/2) and b+_{l+1} b_l (+t_b/2)
  SparseMatrix h_hop_adj;  // adjoint of h_hop, stored for the kernels
  std::size_t basis_dim = 0;
  double force = 0.0;

  double t_bloch() const;
  SparseMatrix at(double t) const;
};

HamiltonianParts build_interaction_picture(const ModelParams& params,
                                           const SymmetrySector& sector,
                                           const TermMask& mask = TermMask::all());

// Time-independent tilted Hamiltonian on an open chain in the full Fock
// basis (order of `basis`), with on-site energies +-delta/2 + l F, l = 1..L.
SparseMatrix build_static_tilted(const ModelParams& params,
                                 const std::vector<FockState>& basis,
                                 const TermMask& mask = TermMask::all());

// Single-particle model in the Wannier-Stark basis alpha_l, beta_n for
// l, n in [-M, M]. Ordering: alpha_{-M..M} then beta_{-M..M}.
struct SingleParticleModel {
  Eigen::MatrixXd h;
  int half_width = 0;
  double edge_coupling = 0.0;  // largest |C0 F J_m| cut off at the window edge
  bool window_too_small = false;
};

inline constexpr int kDefaultBesselCutoff = 8;

SingleParticleModel build_single_particle_transformed(const ModelParams& params,
                                                      int half_width,
                                                      int bessel_cutoff = kDefaultBesselCutoff);

// Isolated resonant pair alpha_{l+r} <-> beta_l.
struct TwoLevelModel {
  double detuning = 0.0;  // delta_tilde - r F
  double coupling = 0.0;  // C0 F J_r(delta_x)

  double splitting() const;       // sqrt(4 coupling^2 + detuning^2)
  double transfer_amplitude() const;
  double occupation(double t) const;  // upper-band population from the lower level
  double period() const;          // 2 pi / splitting
};

TwoLevelModel build_resonant_two_level(const ModelParams& params, int r);

// Coordinate-format dump "row,col,re,im" sorted by (row, col).
std::string dump_coordinates(const SparseMatrix& m);

}  // namespace starkband
