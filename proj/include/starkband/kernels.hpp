#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial *_ref twin that
// performs the same arithmetic in the same order per output element, so the
// two agree bit for bit; the reference versions are what the tests and the
// benchmark compare against.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "starkband/hamiltonian.hpp"
#include "starkband/integrator.hpp"

namespace starkband::kernels {

// dydt = -i H(t) x with H(t) = h_static + e^{iFt} h_hop + e^{-iFt} h_hop^dagger.
void schrodinger_rhs(const HamiltonianParts& parts, double t, const Eigen::VectorXcd& x,
                     Eigen::VectorXcd& dydt);
void schrodinger_rhs_ref(const HamiltonianParts& parts, double t, const Eigen::VectorXcd& x,
                         Eigen::VectorXcd& dydt);

// Propagates every column of `initial` from t0 to t1 independently, each
// with a fresh integrator and the same tolerances.
Eigen::MatrixXcd propagate_columns(const HamiltonianParts& parts, const Eigen::MatrixXcd& initial,
                                   double t0, double t1, const IntegratorOptions& opts);
Eigen::MatrixXcd propagate_columns_ref(const HamiltonianParts& parts,
                                       const Eigen::MatrixXcd& initial, double t0, double t1,
                                       const IntegratorOptions& opts);

// <psi(m T)| D |psi(m T)> / n_particles for m = 0..m_count-1, where
// psi(m T) = sum_n c_n exp(-i eps_n m T) v_n and D is diagonal.
std::vector<double> stroboscopic_occupation(const Eigen::MatrixXcd& eigen_vectors,
                                            const Eigen::VectorXd& quasi_energies,
                                            const Eigen::VectorXcd& coefficients,
                                            double period, const Eigen::VectorXd& diagonal,
                                            double n_particles, std::size_t m_count);
std::vector<double> stroboscopic_occupation_ref(const Eigen::MatrixXcd& eigen_vectors,
                                                const Eigen::VectorXd& quasi_energies,
                                                const Eigen::VectorXcd& coefficients,
                                                double period, const Eigen::VectorXd& diagonal,
                                                double n_particles, std::size_t m_count);

// Caps the OpenMP team size from STARKBAND_THREADS when set.
void configure_threads_from_env();

}  // namespace starkband::kernels
