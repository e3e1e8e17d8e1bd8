#include <benchmark/benchmark.h>

#include <map>

#include <omp.h>

#include "starkband/kernels.hpp"
#include "starkband/model.hpp"
#include "starkband/propagation.hpp"

using namespace starkband;

namespace {

struct Setup {
  SymmetrySector sector;
  HamiltonianParts parts;
  Eigen::VectorXcd psi0;
};

const Setup& setup(int n, int l) {
  static std::map<std::pair<int, int>, Setup> cache;
  auto it = cache.find({n, l});
  if (it == cache.end()) {
    ModelParams p = preset_v0_4();
    p.g = 0.1;
    p.n_particles = n;
    p.n_sites = l;
    Setup s;
    s.sector = build_k0_sector(n, l);
    s.parts = build_interaction_picture(p, s.sector);
    s.psi0 = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(s.sector.dimension()));
    s.psi0.normalize();
    it = cache.emplace(std::pair{n, l}, std::move(s)).first;
  }
  return it->second;
}

template <auto Kernel>
void bm_rhs(benchmark::State& state) {
  const Setup& s = setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  Eigen::VectorXcd dy(s.psi0.size());
  double t = 0.0;
  for (auto _ : state) {
    Kernel(s.parts, t, s.psi0, dy);
    benchmark::DoNotOptimize(dy.data());
    t += 1e-3;
  }
  state.counters["dim"] = static_cast<double>(s.psi0.size());
  state.counters["threads"] = omp_get_max_threads();
}

template <auto Kernel>
void bm_columns(benchmark::State& state) {
  const Setup& s = setup(5, 5);
  const auto cols = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXcd init = Eigen::MatrixXcd::Identity(s.psi0.size(), cols);
  const double tb = s.parts.t_bloch();
  for (auto _ : state) {
    Eigen::MatrixXcd u = Kernel(s.parts, init, 0.0, tb, IntegratorOptions{});
    benchmark::DoNotOptimize(u.data());
  }
  state.counters["threads"] = omp_get_max_threads();
}

template <auto Kernel>
void bm_stroboscopic(benchmark::State& state) {
  const Setup& s = setup(5, 5);
  static const FloquetSpectrum spectrum = [&] {
    const FloquetOperator uf = floquet_operator(s.parts);
    return diagonalize_floquet(uf.u, uf.t_bloch, s.psi0);
  }();
  const Eigen::VectorXd diag = upper_number_diagonal(s.sector);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto v = Kernel(spectrum.eigen_vectors, spectrum.quasi_energies, spectrum.coefficients, spectrum.t_bloch, diag,
                    5.0, m);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(bm_rhs<kernels::schrodinger_rhs_ref>)->Args({5, 5})->Args({6, 7})->Args({7, 7});
BENCHMARK(bm_rhs<kernels::schrodinger_rhs>)->Args({5, 5})->Args({6, 7})->Args({7, 7});
BENCHMARK(bm_columns<kernels::propagate_columns_ref>)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_columns<kernels::propagate_columns>)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stroboscopic<kernels::stroboscopic_occupation_ref>)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stroboscopic<kernels::stroboscopic_occupation>)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
