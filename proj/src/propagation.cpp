#include "starkband/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "starkband/error.hpp"
#include "starkband/kernels.hpp"

namespace starkband {

EvolveResult evolve(const WaveFunction& psi0, const HamiltonianParts& parts, double t_final,
                    const IntegratorOptions& opts, double sample_every,
                    const SampleObserver& observer) {
  if (static_cast<std::size_t>(psi0.coords.size()) != parts.basis_dim)
    throw Error(Errc::dimension_mismatch, "initial state does not match Hamiltonian dimension");
  const double t0 = psi0.time;
  if (!(t_final > t0)) throw Error(Errc::invalid_parameter, "t_final must exceed start time");

  RungeKutta integrator(
      [&parts](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        kernels::schrodinger_rhs(parts, t, y, dy);
      },
      psi0.coords.size(), opts);

  Eigen::VectorXcd y = psi0.coords;
  double t = t0;
  if (observer) observer(t, y);
  if (sample_every > 0.0) {
    const double slack = 1e-9 * sample_every;
    for (long k = 1;; ++k) {
      const double target = t0 + static_cast<double>(k) * sample_every;
      if (target > t_final + slack) break;
      integrator.advance(y, t, target);
      t = target;
      if (observer) observer(t, y);
    }
  }
  if (t < t_final) integrator.advance(y, t, t_final);

  EvolveResult out;
  out.final_state = {y, std::max(t, t_final)};
  out.stats = integrator.stats();
  out.norm_drift = std::abs(y.norm() - 1.0);
  return out;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd d = u.adjoint() * u;
  d.diagonal().array() -= 1.0;
  return d.cwiseAbs().maxCoeff();
}

FloquetOperator floquet_operator(const HamiltonianParts& parts, const IntegratorOptions& opts,
                                 std::size_t max_dim) {
  if (parts.basis_dim > max_dim)
    throw Error(Errc::dimension_too_large,
                "sector dimension " + std::to_string(parts.basis_dim) +
                    " exceeds the Floquet cap " + std::to_string(max_dim));
  const auto n = static_cast<Eigen::Index>(parts.basis_dim);
  FloquetOperator f;
  f.t_bloch = parts.t_bloch();
  f.u = kernels::propagate_columns(parts, Eigen::MatrixXcd::Identity(n, n), 0.0, f.t_bloch, opts);
  f.unitarity_defect = unitarity_defect(f.u);
  if (f.unitarity_defect > kMaxUnitarityDefect)
    throw Error(Errc::unitarity_defect,
                "Floquet operator unitarity defect " + std::to_string(f.unitarity_defect) +
                    " exceeds 1e-6; tighten rtol/atol");
  return f;
}

double fold_quasi_energy(double eps, double force) {
  double e = eps - force * std::floor((eps + 0.5 * force) / force);
  if (e >= 0.5 * force) e -= force;
  if (e < -0.5 * force) e += force;
  return e;
}

FloquetSpectrum diagonalize_floquet(const Eigen::MatrixXcd& u, double t_bloch,
                                    const Eigen::VectorXcd& psi0, double cluster_tol) {
  if (u.rows() != u.cols() || u.rows() != psi0.size())
    throw Error(Errc::dimension_mismatch, "Floquet operator and initial state disagree in size");
  const Eigen::Index n = u.rows();
  const double force = 2.0 * std::numbers::pi / t_bloch;

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u, true);
  if (schur.info() != Eigen::Success)
    throw Error(Errc::integration_failure, "complex Schur decomposition did not converge");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& q = schur.matrixU();

  std::vector<double> eps(n);
  for (Eigen::Index i = 0; i < n; ++i)
    eps[i] = fold_quasi_energy(-std::arg(t(i, i)) / t_bloch, force);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return eps[a] < eps[b]; });

  FloquetSpectrum s;
  s.t_bloch = t_bloch;
  s.force = force;
  s.quasi_energies.resize(n);
  s.eigen_vectors.resize(n, n);
  std::vector<cplx> lambda(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.quasi_energies[k] = eps[order[k]];
    s.eigen_vectors.col(k) = q.col(order[k]);
    lambda[k] = t(order[k], order[k]);
  }

  // Modified Gram-Schmidt inside runs of near-equal eigenvalues.
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(lambda[end] - lambda[end - 1]) < cluster_tol) ++end;
    for (Eigen::Index j = start; j < end; ++j) {
      for (Eigen::Index i = start; i < j; ++i) {
        const cplx proj = s.eigen_vectors.col(i).dot(s.eigen_vectors.col(j));
        s.eigen_vectors.col(j) -= proj * s.eigen_vectors.col(i);
      }
      s.eigen_vectors.col(j).normalize();
    }
    start = end;
  }

  s.unitarity_defect = unitarity_defect(u);
  set_initial_state(s, psi0);
  return s;
}

void set_initial_state(FloquetSpectrum& spectrum, const Eigen::VectorXcd& psi0) {
  if (psi0.size() != spectrum.eigen_vectors.rows())
    throw Error(Errc::dimension_mismatch, "initial state does not match spectrum");
  spectrum.coefficients = spectrum.eigen_vectors.adjoint() * psi0;
}

WaveFunction stroboscopic_evolve(const FloquetSpectrum& s, long m) {
  const double tm = static_cast<double>(m) * s.t_bloch;
  Eigen::VectorXcd w(s.coefficients.size());
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w[k] = s.coefficients[k] * std::polar(1.0, -s.quasi_energies[k] * tm);
  return {s.eigen_vectors * w, tm};
}

double CoefficientCluster::abs_c() const { return std::sqrt(weight); }

std::vector<CoefficientCluster> aggregate_coefficients(const FloquetSpectrum& s, double tol) {
  std::vector<CoefficientCluster> out;
  const auto n = static_cast<Eigen::Index>(s.size());
  if (n == 0) return out;
  // Runs of sorted quasi-energies; energies are unwrapped relative to the
  // first member so a run crossing the fold boundary stays contiguous.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k == n || s.quasi_energies[k] - s.quasi_energies[k - 1] > tol) {
      runs.emplace_back(start, k);
      start = k;
    }
  }
  const bool wraps = runs.size() > 1 &&
                     s.quasi_energies[0] + s.force - s.quasi_energies[n - 1] <= tol;
  auto accumulate_run = [&](CoefficientCluster& c, Eigen::Index a, Eigen::Index b,
                            double shift, double& esum) {
    for (Eigen::Index k = a; k < b; ++k) {
      const double w = std::norm(s.coefficients[k]);
      c.weight += w;
      esum += w * (s.quasi_energies[k] + shift);
      ++c.members;
    }
  };
  const std::size_t last = wraps ? runs.size() - 1 : runs.size();
  for (std::size_t r = 0; r < last; ++r) {
    CoefficientCluster c;
    double esum = 0.0;
    accumulate_run(c, runs[r].first, runs[r].second, 0.0, esum);
    if (r == 0 && wraps)
      accumulate_run(c, runs.back().first, runs.back().second, -s.force, esum);
    c.quasi_energy = c.weight > 0.0 ? fold_quasi_energy(esum / c.weight, s.force)
                                    : s.quasi_energies[runs[r].first];
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.quasi_energy < b.quasi_energy;
  });
  return out;
}

double upper_band_occupation(const SymmetrySector& sector, const Eigen::VectorXcd& coords) {
  double acc = 0.0;
  for (std::size_t r = 0; r < sector.dimension(); ++r)
    acc += sector.representatives[r].upper_total() * std::norm(coords[r]);
  return acc / sector.n_particles;
}

OscillationTrace occupation_series_direct(const Eigen::VectorXcd& psi0,
                                          const HamiltonianParts& parts,
                                          const SymmetrySector& sector, double t_final,
                                          double sample_every, const IntegratorOptions& opts,
                                          EvolveResult* result) {
  OscillationTrace trace;
  trace.times.reserve(static_cast<std::size_t>(t_final / sample_every) + 2);
  trace.values.reserve(trace.times.capacity());
  auto r = evolve({psi0, 0.0}, parts, t_final, opts, sample_every,
                  [&](double t, const Eigen::VectorXcd& y) {
                    trace.push(t, upper_band_occupation(sector, y));
                  });
  if (result) *result = std::move(r);
  return trace;
}

OscillationTrace occupation_series_stroboscopic(const FloquetSpectrum& s,
                                                const SymmetrySector& sector,
                                                std::size_t m_count) {
  const Eigen::VectorXd diag = upper_number_diagonal(sector);
  OscillationTrace trace;
  trace.values = kernels::stroboscopic_occupation(s.eigen_vectors, s.quasi_energies,
                                                  s.coefficients, s.t_bloch, diag,
                                                  sector.n_particles, m_count);
  trace.times.resize(m_count);
  for (std::size_t m = 0; m < m_count; ++m) trace.times[m] = static_cast<double>(m) * s.t_bloch;
  return trace;
}

}  // namespace starkband
