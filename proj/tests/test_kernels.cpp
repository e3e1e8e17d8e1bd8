#include <doctest.h>

#include <cstdlib>

#include <omp.h>

#include "starkband/kernels.hpp"
#include "starkband/propagation.hpp"

using namespace starkband;

namespace {

struct System {
  SymmetrySector sector;
  HamiltonianParts parts;
};

System make_system(int n, int l, double g) {
  ModelParams p = preset_v0_4();
  p.g = g;
  p.n_particles = n;
  p.n_sites = l;
  System s;
  s.sector = build_k0_sector(n, l);
  s.parts = build_interaction_picture(p, s.sector);
  return s;
}

// Runs f once per team size and restores the previous setting.
template <class F>
void for_team_sizes(F f) {
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    CAPTURE(threads);
    f();
  }
  omp_set_num_threads(saved);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("right-hand side: parallel equals reference bit for bit") {
  const System s = make_system(6, 7, 0.1);  // dimension 3876, above the parallel threshold
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(s.parts.h_static.rows());
  Eigen::VectorXcd a(x.size()), b(x.size());
  kernels::schrodinger_rhs_ref(s.parts, 0.731, x, a);
  for_team_sizes([&] {
    kernels::schrodinger_rhs(s.parts, 0.731, x, b);
    CHECK(a == b);
  });
}

TEST_CASE("right-hand side equals -i H(t) x") {
  const System s = make_system(3, 3, 0.2);
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(s.parts.h_static.rows());
  Eigen::VectorXcd dy(x.size());
  kernels::schrodinger_rhs_ref(s.parts, 1.3, x, dy);
  const Eigen::VectorXcd expect = std::complex<double>(0, -1) * (s.parts.at(1.3) * x);
  CHECK((dy - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("column propagation: parallel equals reference bit for bit") {
  const System s = make_system(3, 3, 0.1);
  const auto n = s.parts.h_static.rows();
  const Eigen::MatrixXcd init = Eigen::MatrixXcd::Identity(n, n);
  const double tb = s.parts.t_bloch();
  const Eigen::MatrixXcd ref = kernels::propagate_columns_ref(s.parts, init, 0.0, tb, {});
  for_team_sizes([&] { CHECK(kernels::propagate_columns(s.parts, init, 0.0, tb, {}) == ref); });
}

TEST_CASE("stroboscopic occupation: parallel equals reference bit for bit") {
  const System s = make_system(4, 4, 0.1);
  const FloquetOperator uf = floquet_operator(s.parts);
  const FloquetSpectrum spectrum =
      diagonalize_floquet(uf.u, uf.t_bloch, project_initial_state(UnitFillingLower{}, s.sector));
  const Eigen::VectorXd diag = upper_number_diagonal(s.sector);
  const auto ref = kernels::stroboscopic_occupation_ref(spectrum.eigen_vectors, spectrum.quasi_energies,
                                                        spectrum.coefficients, spectrum.t_bloch, diag,
                                                        4.0, 500);
  for_team_sizes([&] {
    CHECK(kernels::stroboscopic_occupation(spectrum.eigen_vectors, spectrum.quasi_energies,
                                           spectrum.coefficients, spectrum.t_bloch, diag, 4.0,
                                           500) == ref);
  });
}

TEST_CASE("thread cap from the environment") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  setenv("STARKBAND_THREADS", "2", 1);
  kernels::configure_threads_from_env();
  CHECK(omp_get_max_threads() == 2);
  setenv("STARKBAND_THREADS", "64", 1);
  kernels::configure_threads_from_env();
  CHECK(omp_get_max_threads() <= 2);
  unsetenv("STARKBAND_THREADS");
  omp_set_num_threads(saved);
}

}  // TEST_SUITE
