#include "starkband/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "starkband/bessel.hpp"
#include "starkband/error.hpp"

namespace starkband {

namespace {

using Triplet = Eigen::Triplet<cplx, int>;

double diagonal_energy(const FockState& s, const ModelParams& p, const TermMask& m,
                       bool with_tilt) {
  const int L = s.n_sites();
  double e = 0.0;
  for (int l = 0; l < L; ++l) {
    const double na = s.lower(l);
    const double nb = s.upper(l);
    e += 0.5 * p.delta * (nb - na);
    if (with_tilt) e += (l + 1) * p.force * (na + nb);
    if (m.int_a) e += 0.5 * p.g * p.w_a * na * (na - 1.0);
    if (m.int_b) e += 0.5 * p.g * p.w_b * nb * (nb - 1.0);
    if (m.int_x_density) e += 2.0 * p.g * p.w_x * na * nb;
  }
  return e;
}

// Calls emit(target, amplitude) for the on-site inter-band terms.
template <class Emit>
void for_each_onsite_offdiagonal(const FockState& s, const ModelParams& p, const TermMask& m,
                                 Emit&& emit) {
  const int L = s.n_sites();
  for (int l = 0; l < L; ++l) {
    const int na = s.lower(l);
    const int nb = s.upper(l);
    if (m.coupling_c0 && p.c0 != 0.0) {
      const double cf = p.c0 * p.force;
      if (na > 0) {  // b+_l a_l
        FockState t = s;
        t.set_mode(l, na - 1);
        t.set_mode(L + l, nb + 1);
        emit(t, cf * std::sqrt(double(na)) * std::sqrt(double(nb + 1)));
      }
      if (nb > 0) {  // a+_l b_l
        FockState t = s;
        t.set_mode(l, na + 1);
        t.set_mode(L + l, nb - 1);
        emit(t, cf * std::sqrt(double(nb)) * std::sqrt(double(na + 1)));
      }
    }
    if (m.int_x_pair && p.g * p.w_x != 0.0) {
      const double pair = 0.5 * p.g * p.w_x;
      if (na > 1) {  // b+ b+ a a
        FockState t = s;
        t.set_mode(l, na - 2);
        t.set_mode(L + l, nb + 2);
        emit(t, pair * std::sqrt(double(na) * (na - 1)) * std::sqrt(double(nb + 1) * (nb + 2)));
      }
      if (nb > 1) {  // a+ a+ b b
        FockState t = s;
        t.set_mode(l, na + 2);
        t.set_mode(L + l, nb - 2);
        emit(t, pair * std::sqrt(double(nb) * (nb - 1)) * std::sqrt(double(na + 1) * (na + 2)));
      }
    }
  }
}

// Single hop src -> dst within one band (mode offset 0 for a, L for b).
template <class Emit>
void hop(const FockState& s, int offset, int src, int dst, double coeff, Emit&& emit) {
  const int n_src = s.mode(offset + src);
  if (n_src == 0 || coeff == 0.0) return;
  FockState t = s;
  t.set_mode(offset + src, n_src - 1);
  const int n_dst = t.mode(offset + dst) + 1;
  t.set_mode(offset + dst, n_dst);
  emit(t, coeff * std::sqrt(double(n_src)) * std::sqrt(double(n_dst)));
}

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<int>(dim), static_cast<int>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

TermMask TermMask::density_cross_only() {
  TermMask m;
  m.int_a = false;
  m.int_b = false;
  m.int_x_pair = false;
  return m;
}

TermMask TermMask::parse(const std::string& text) {
  if (text.empty() || text == "all") return all();
  TermMask m;
  m.hop_a = m.hop_b = m.coupling_c0 = false;
  m.int_a = m.int_b = m.int_x_density = m.int_x_pair = false;
  m.tilt = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "hop_a") m.hop_a = true;
    else if (item == "hop_b") m.hop_b = true;
    else if (item == "c0") m.coupling_c0 = true;
    else if (item == "int_a") m.int_a = true;
    else if (item == "int_b") m.int_b = true;
    else if (item == "int_x_density") m.int_x_density = true;
    else if (item == "int_x_pair") m.int_x_pair = true;
    else if (item == "tilt") m.tilt = true;
    else throw Error(Errc::config, "unknown term '" + item + "' in --terms");
  }
  return m;
}

std::string TermMask::to_string() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(hop_a, "hop_a");
  add(hop_b, "hop_b");
  add(coupling_c0, "c0");
  add(int_a, "int_a");
  add(int_b, "int_b");
  add(int_x_density, "int_x_density");
  add(int_x_pair, "int_x_pair");
  return out;
}

bool TermMask::any() const {
  return hop_a || hop_b || coupling_c0 || int_a || int_b || int_x_density || int_x_pair;
}

double HamiltonianParts::t_bloch() const { return 2.0 * std::numbers::pi / force; }

SparseMatrix HamiltonianParts::at(double t) const {
  const cplx phase = std::polar(1.0, force * t);
  SparseMatrix h = h_static + phase * h_hop + std::conj(phase) * h_hop_adj;
  h.makeCompressed();
  return h;
}

HamiltonianParts build_interaction_picture(const ModelParams& p, const SymmetrySector& sector,
                                           const TermMask& mask) {
  if (sector.n_particles != p.n_particles || sector.n_sites != p.n_sites)
    throw Error(Errc::dimension_mismatch,
                "sector was built for a different (N, L) than the parameters");

  const int L = sector.n_sites;
  const std::size_t dim = sector.dimension();
  std::vector<Triplet> st, hp;
  st.reserve(dim * 8);
  hp.reserve(dim * 2 * L);

  for (std::size_t r = 0; r < dim; ++r) {
    const int col = static_cast<int>(r);
    const FockState& s = sector.representatives[r];
    // Translation-invariant operators act on orbit sums with the factor
    // sqrt(s_r / s_r') between source and target representatives.
    auto into = [&](std::vector<Triplet>& out) {
      return [&, col](const FockState& t, double amp) {
        const auto loc = sector.lookup(t);
        out.emplace_back(loc.index, col,
                         amp * sector.norms[loc.index] / sector.norms[col]);
      };
    };
    const double d = diagonal_energy(s, p, mask, false);
    if (d != 0.0) st.emplace_back(col, col, d);
    for_each_onsite_offdiagonal(s, p, mask, into(st));

    if (L > 1) {
      auto emit_hop = into(hp);
      for (int l = 0; l < L; ++l) {
        const int next = (l + 1) % L;
        if (mask.hop_a) hop(s, 0, l, next, -0.5 * p.t_a, emit_hop);
        if (mask.hop_b) hop(s, L, l, next, 0.5 * p.t_b, emit_hop);
      }
    }
  }

  HamiltonianParts parts;
  parts.h_static = from_triplets(dim, st);
  parts.h_hop = from_triplets(dim, hp);
  parts.h_hop_adj = SparseMatrix(parts.h_hop.adjoint());
  parts.h_hop_adj.makeCompressed();
  parts.basis_dim = dim;
  parts.force = p.force;
  return parts;
}

SparseMatrix build_static_tilted(const ModelParams& p, const std::vector<FockState>& basis,
                                 const TermMask& mask) {
  const std::size_t dim = basis.size();
  if (dim == 0) return SparseMatrix(0, 0);
  const int L = basis.front().n_sites();
  const int N = basis.front().total();

  FockIndexer indexer(N, L);
  std::vector<int> position(indexer.size(), -1);
  for (std::size_t i = 0; i < dim; ++i) {
    if (basis[i].n_sites() != L || basis[i].total() != N)
      throw Error(Errc::dimension_mismatch, "basis mixes particle numbers or lattice sizes");
    position[indexer.rank(basis[i])] = static_cast<int>(i);
  }

  std::vector<Triplet> trip;
  trip.reserve(dim * 8);
  for (std::size_t i = 0; i < dim; ++i) {
    const int col = static_cast<int>(i);
    const FockState& s = basis[i];
    auto emit = [&](const FockState& t, double amp) {
      const int row = position[indexer.rank(t)];
      if (row < 0) throw Error(Errc::dimension_mismatch, "basis is not closed under H");
      trip.emplace_back(row, col, amp);
    };
    const double d = diagonal_energy(s, p, mask, mask.tilt);
    if (d != 0.0) trip.emplace_back(col, col, d);
    for_each_onsite_offdiagonal(s, p, mask, emit);
    for (int l = 0; l + 1 < L; ++l) {
      if (mask.hop_a) {
        hop(s, 0, l, l + 1, -0.5 * p.t_a, emit);
        hop(s, 0, l + 1, l, -0.5 * p.t_a, emit);
      }
      if (mask.hop_b) {
        hop(s, L, l, l + 1, 0.5 * p.t_b, emit);
        hop(s, L, l + 1, l, 0.5 * p.t_b, emit);
      }
    }
  }
  return from_triplets(dim, trip);
}

SingleParticleModel build_single_particle_transformed(const ModelParams& p, int half_width,
                                                      int bessel_cutoff) {
  if (half_width < 0 || bessel_cutoff < 0)
    throw Error(Errc::invalid_parameter, "window half-width and Bessel cutoff must be >= 0");
  const int M = half_width;
  const int n = 2 * M + 1;
  const double dx = (p.t_a + p.t_b) / p.force;
  const double cf = p.c0 * p.force;

  SingleParticleModel out;
  out.half_width = M;
  out.h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int l = -M; l <= M; ++l) {
    out.h(l + M, l + M) = -0.5 * p.delta + l * p.force;
    out.h(n + l + M, n + l + M) = 0.5 * p.delta + l * p.force;
  }
  // alpha_l couples to beta_m with C0 F J_{m-l}(delta_x).
  for (int l = -M; l <= M; ++l) {
    for (int m = std::max(-M, l - bessel_cutoff); m <= std::min(M, l + bessel_cutoff); ++m) {
      const double c = cf * bessel_j(m - l, dx);
      out.h(l + M, n + m + M) = c;
      out.h(n + m + M, l + M) = c;
    }
  }
  const int edge = std::min(M, bessel_cutoff + 1);
  out.edge_coupling = std::abs(cf * bessel_j(edge, dx));
  out.window_too_small = std::abs(bessel_j(edge, dx)) > 1e-12;
  return out;
}

double TwoLevelModel::splitting() const {
  return std::sqrt(4.0 * coupling * coupling + detuning * detuning);
}

double TwoLevelModel::transfer_amplitude() const {
  const double s = splitting();
  return s > 0.0 ? 4.0 * coupling * coupling / (s * s) : 0.0;
}

double TwoLevelModel::occupation(double t) const {
  const double s = std::sin(splitting() * t / 2.0);
  return transfer_amplitude() * s * s;
}

double TwoLevelModel::period() const {
  const double s = splitting();
  return s > 0.0 ? 2.0 * std::numbers::pi / s : std::numeric_limits<double>::infinity();
}

TwoLevelModel build_resonant_two_level(const ModelParams& p, int r) {
  TwoLevelModel m;
  m.detuning = delta_tilde(p) - r * p.force;
  m.coupling = p.c0 * p.force * bessel_j(r, (p.t_a + p.t_b) / p.force);
  return m;
}

std::string dump_coordinates(const SparseMatrix& m) {
  std::string out;
  char buf[128];
  for (int row = 0; row < m.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", row, static_cast<int>(it.col()),
                    it.value().real(), it.value().imag());
      out += buf;
    }
  }
  return out;
}

}  // namespace starkband
