#include "starkband/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

namespace starkband::kernels {

namespace {

// Below this size the team start-up costs more than the loop.
constexpr Eigen::Index kParallelRows = 512;

inline void rhs_row(const HamiltonianParts& parts, cplx phase, const cplx* x, int row,
                    cplx* out) {
  const SparseMatrix* mats[3] = {&parts.h_static, &parts.h_hop, &parts.h_hop_adj};
  cplx acc[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    const SparseMatrix& m = *mats[k];
    const int* outer = m.outerIndexPtr();
    const int* inner = m.innerIndexPtr();
    const cplx* val = m.valuePtr();
    for (int p = outer[row]; p < outer[row + 1]; ++p) acc[k] += val[p] * x[inner[p]];
  }
  const cplx h = acc[0] + phase * acc[1] + std::conj(phase) * acc[2];
  *out = cplx(h.imag(), -h.real());  // -i h
}

struct Significant {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd energies;
  Eigen::VectorXcd coefficients;
};

// Drops eigenvectors whose overlap is exactly negligible for the sum.
Significant select_significant(const Eigen::MatrixXcd& v, const Eigen::VectorXd& eps,
                               const Eigen::VectorXcd& c) {
  const double cmax = c.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (std::abs(c[k]) > 1e-15 * cmax) keep.push_back(k);
  Significant s;
  s.vectors.resize(v.rows(), static_cast<Eigen::Index>(keep.size()));
  s.energies.resize(static_cast<Eigen::Index>(keep.size()));
  s.coefficients.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    s.vectors.col(j) = v.col(keep[j]);
    s.energies[j] = eps[keep[j]];
    s.coefficients[j] = c[keep[j]];
  }
  return s;
}

double occupation_at(const Significant& s, double period, const Eigen::VectorXd& diagonal,
                     double n_particles, std::size_t m, Eigen::VectorXcd& w,
                     Eigen::VectorXcd& psi) {
  const double tm = static_cast<double>(m) * period;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w[k] = s.coefficients[k] * std::polar(1.0, -s.energies[k] * tm);
  psi.noalias() = s.vectors * w;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) acc += diagonal[i] * std::norm(psi[i]);
  return acc / n_particles;
}

}  // namespace

void schrodinger_rhs(const HamiltonianParts& parts, double t, const Eigen::VectorXcd& x,
                     Eigen::VectorXcd& dydt) {
  const int n = static_cast<int>(parts.basis_dim);
  const cplx phase = std::polar(1.0, parts.force * t);
  const cplx* xp = x.data();
  cplx* out = dydt.data();
#pragma omp parallel for schedule(static) if (n >= kParallelRows)
  for (int row = 0; row < n; ++row) rhs_row(parts, phase, xp, row, out + row);
}

void schrodinger_rhs_ref(const HamiltonianParts& parts, double t, const Eigen::VectorXcd& x,
                         Eigen::VectorXcd& dydt) {
  const int n = static_cast<int>(parts.basis_dim);
  const cplx phase = std::polar(1.0, parts.force * t);
  for (int row = 0; row < n; ++row) rhs_row(parts, phase, x.data(), row, dydt.data() + row);
}

namespace {

void propagate_one(const HamiltonianParts& parts, Eigen::MatrixXcd& out, Eigen::Index col,
                   double t0, double t1, const IntegratorOptions& opts) {
  RungeKutta integrator(
      [&parts](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        schrodinger_rhs_ref(parts, t, y, dy);
      },
      out.rows(), opts);
  Eigen::VectorXcd y = out.col(col);
  integrator.advance(y, t0, t1);
  out.col(col) = y;
}

}  // namespace

Eigen::MatrixXcd propagate_columns(const HamiltonianParts& parts, const Eigen::MatrixXcd& initial,
                                   double t0, double t1, const IntegratorOptions& opts) {
  Eigen::MatrixXcd out = initial;
  const Eigen::Index cols = initial.cols();
  // Exceptions may not leave an OpenMP region; park the first and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index j = 0; j < cols; ++j) {
    try {
      propagate_one(parts, out, j, t0, t1, opts);
    } catch (...) {
#pragma omp critical(starkband_propagate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Eigen::MatrixXcd propagate_columns_ref(const HamiltonianParts& parts,
                                       const Eigen::MatrixXcd& initial, double t0, double t1,
                                       const IntegratorOptions& opts) {
  Eigen::MatrixXcd out = initial;
  for (Eigen::Index j = 0; j < initial.cols(); ++j) propagate_one(parts, out, j, t0, t1, opts);
  return out;
}

std::vector<double> stroboscopic_occupation(const Eigen::MatrixXcd& eigen_vectors,
                                            const Eigen::VectorXd& quasi_energies,
                                            const Eigen::VectorXcd& coefficients,
                                            double period, const Eigen::VectorXd& diagonal,
                                            double n_particles, std::size_t m_count) {
  const Significant s = select_significant(eigen_vectors, quasi_energies, coefficients);
  std::vector<double> out(m_count);
  const auto count = static_cast<std::int64_t>(m_count);
#pragma omp parallel
  {
    Eigen::VectorXcd w(s.coefficients.size());
    Eigen::VectorXcd psi(s.vectors.rows());
#pragma omp for schedule(static)
    for (std::int64_t m = 0; m < count; ++m)
      out[m] = occupation_at(s, period, diagonal, n_particles, static_cast<std::size_t>(m), w, psi);
  }
  return out;
}

std::vector<double> stroboscopic_occupation_ref(const Eigen::MatrixXcd& eigen_vectors,
                                                const Eigen::VectorXd& quasi_energies,
                                                const Eigen::VectorXcd& coefficients,
                                                double period, const Eigen::VectorXd& diagonal,
                                                double n_particles, std::size_t m_count) {
  const Significant s = select_significant(eigen_vectors, quasi_energies, coefficients);
  std::vector<double> out(m_count);
  Eigen::VectorXcd w(s.coefficients.size());
  Eigen::VectorXcd psi(s.vectors.rows());
  for (std::size_t m = 0; m < m_count; ++m)
    out[m] = occupation_at(s, period, diagonal, n_particles, m, w, psi);
  return out;
}

void configure_threads_from_env() {
  const char* env = std::getenv("STARKBAND_THREADS");
  if (!env || !*env) return;
  try {
    const int n = std::stoi(env);
    if (n >= 1) omp_set_num_threads(std::min(n, omp_get_max_threads()));
  } catch (const std::exception&) {
    // Ignore malformed values; the OpenMP default stands.
  }
}

}  // namespace starkband::kernels
