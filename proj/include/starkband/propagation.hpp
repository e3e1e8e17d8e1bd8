#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "starkband/fock.hpp"
#include "starkband/hamiltonian.hpp"
#include "starkband/integrator.hpp"
#include "starkband/trace.hpp"

namespace starkband {

struct WaveFunction {
  Eigen::VectorXcd coords;
  double time = 0.0;
};

using SampleObserver = std::function<void(double t, const Eigen::VectorXcd& coords)>;

struct EvolveResult {
  WaveFunction final_state;
  IntegratorStats stats;
  double norm_drift = 0.0;  // | ||psi(t_final)|| - 1 |
};

// Solves i dpsi/dt = H(t) psi from psi0.time to t_final. The observer sees
// psi0 and then every psi0.time + k * sample_every up to t_final; pass
// sample_every <= 0 for no intermediate samples.
EvolveResult evolve(const WaveFunction& psi0, const HamiltonianParts& parts, double t_final,
                    const IntegratorOptions& opts = {}, double sample_every = 0.0,
                    const SampleObserver& observer = {});

inline constexpr std::size_t kDefaultFloquetCap = 20'000;
inline constexpr double kMaxUnitarityDefect = 1e-6;

struct FloquetOperator {
  Eigen::MatrixXcd u;
  double t_bloch = 0.0;
  double unitarity_defect = 0.0;
};

// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const Eigen::MatrixXcd& u);

// One-period propagator U_F(T_B), one integrated column per basis vector.
FloquetOperator floquet_operator(const HamiltonianParts& parts, const IntegratorOptions& opts = {},
                                 std::size_t max_dim = kDefaultFloquetCap);

struct FloquetSpectrum {
  Eigen::VectorXd quasi_energies;  // ascending, in [-F/2, F/2)
  Eigen::MatrixXcd eigen_vectors;  // columns, orthonormal
  Eigen::VectorXcd coefficients;   // c_n = <eps_n|psi0>
  double t_bloch = 0.0;
  double force = 0.0;
  double unitarity_defect = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(quasi_energies.size()); }
};

// Folds a quasi-energy into [-F/2, F/2).
double fold_quasi_energy(double eps, double force);

inline constexpr double kClusterTolerance = 1e-10;

// Eigen-decomposition through the complex Schur form, whose unitary factor
// supplies an orthonormal eigenbasis even inside degenerate clusters.
// Clusters with eigenvalue spacing below cluster_tol are additionally
// re-orthonormalised.
FloquetSpectrum diagonalize_floquet(const Eigen::MatrixXcd& u, double t_bloch,
                                    const Eigen::VectorXcd& psi0,
                                    double cluster_tol = kClusterTolerance);

// Same spectrum, new initial state.
void set_initial_state(FloquetSpectrum& spectrum, const Eigen::VectorXcd& psi0);

// psi(m T_B) = sum_n c_n exp(-i eps_n m T_B) |eps_n>.
WaveFunction stroboscopic_evolve(const FloquetSpectrum& spectrum, long m);

// Aggregated |c_n| over (near-)degenerate quasi-energies.
struct CoefficientCluster {
  double quasi_energy = 0.0;  // |c|^2-weighted mean
  double weight = 0.0;        // sum |c_n|^2
  std::size_t members = 0;
  double abs_c() const;
};

inline constexpr double kAggregateTolerance = 1e-7;

std::vector<CoefficientCluster> aggregate_coefficients(const FloquetSpectrum& spectrum,
                                                       double tol = kAggregateTolerance);

// N_b = <psi| sum_l n_l^b |psi> / N for sector coordinates.
double upper_band_occupation(const SymmetrySector& sector, const Eigen::VectorXcd& coords);

OscillationTrace occupation_series_direct(const Eigen::VectorXcd& psi0,
                                          const HamiltonianParts& parts,
                                          const SymmetrySector& sector, double t_final,
                                          double sample_every, const IntegratorOptions& opts = {},
                                          EvolveResult* result = nullptr);

// Samples at m = 0..m_count-1 Bloch periods.
OscillationTrace occupation_series_stroboscopic(const FloquetSpectrum& spectrum,
                                                const SymmetrySector& sector,
                                                std::size_t m_count);

}  // namespace starkband
