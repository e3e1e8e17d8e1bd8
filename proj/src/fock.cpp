#include "starkband/fock.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "starkband/error.hpp"

namespace starkband {

FockState::FockState(const std::vector<int>& lower, const std::vector<int>& upper)
    : n_sites_(static_cast<int>(lower.size())), modes_(2 * lower.size(), 0) {
  if (lower.size() != upper.size())
    throw Error(Errc::invalid_parameter, "lower and upper occupation lists differ in length");
  for (int l = 0; l < n_sites_; ++l) {
    if (lower[l] < 0 || upper[l] < 0 || lower[l] > 255 || upper[l] > 255)
      throw Error(Errc::invalid_parameter, "occupation out of range [0, 255]");
    modes_[l] = static_cast<std::uint8_t>(lower[l]);
    modes_[n_sites_ + l] = static_cast<std::uint8_t>(upper[l]);
  }
}

int FockState::total() const {
  return std::accumulate(modes_.begin(), modes_.end(), 0);
}

int FockState::upper_total() const {
  return std::accumulate(modes_.begin() + n_sites_, modes_.end(), 0);
}

std::string FockState::to_string() const {
  std::ostringstream os;
  os << '|';
  for (int m = 0; m < n_modes(); ++m) {
    if (m == n_sites_) os << ';';
    else if (m > 0) os << ',';
    os << static_cast<int>(modes_[m]);
  }
  os << '>';
  return os.str();
}

FockState FockState::parse(const std::string& text) {
  std::string body;
  for (char c : text)
    if (c != '|' && c != '>' && c != ' ') body += c;
  const auto semi = body.find(';');
  if (semi == std::string::npos)
    throw Error(Errc::invalid_parameter, "Fock state needs ';' between bands: " + text);
  auto split = [&](const std::string& part) {
    std::vector<int> out;
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw Error(Errc::invalid_parameter, "bad occupation '" + item + "' in " + text);
      }
    }
    return out;
  };
  return FockState(split(body.substr(0, semi)), split(body.substr(semi + 1)));
}

std::uint64_t full_dimension(int n_particles, int n_sites) {
  if (n_particles < 0 || n_sites < 1)
    throw Error(Errc::invalid_parameter, "full_dimension needs N >= 0 and L >= 1");
  // C(N + 2L - 1, k) with k = min(N, 2L - 1); every partial product is
  // itself a binomial coefficient, so the division is exact.
  const std::uint64_t n = static_cast<std::uint64_t>(n_particles) + 2ull * n_sites - 1;
  const std::uint64_t k = std::min<std::uint64_t>(n_particles, 2ull * n_sites - 1);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw Error(Errc::overflow, "Fock dimension exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(c);
}

FockIndexer::FockIndexer(int n_particles, int n_sites)
    : n_particles_(n_particles), n_sites_(n_sites), n_modes_(2 * n_sites) {
  size_ = full_dimension(n_particles, n_sites);
  const int stride = n_modes_ + 1;
  table_.assign(static_cast<std::size_t>(n_particles + 1) * stride, 0);
  for (int n = 0; n <= n_particles; ++n) {
    table_[n * stride + 0] = n == 0 ? 1 : 0;
    for (int m = 1; m <= n_modes_; ++m) {
      // count(n, m) = count(n, m - 1) + count(n - 1, m); bounded by size_.
      table_[n * stride + m] =
          table_[n * stride + m - 1] + (n > 0 ? table_[(n - 1) * stride + m] : 0);
    }
  }
}

std::uint64_t FockIndexer::rank(const FockState& s) const {
  std::uint64_t r = 0;
  int rem = n_particles_;
  for (int i = 0; i + 1 < n_modes_; ++i) {
    const int ni = s.mode(i);
    // Every state with a larger occupation in mode i comes first:
    // sum_{u=0}^{rem-ni-1} count(u, M-i-1) = count(rem-ni-1, M-i).
    if (rem > ni) r += count(rem - ni - 1, n_modes_ - i);
    rem -= ni;
  }
  return r;
}

FockState FockIndexer::unrank(std::uint64_t r) const {
  FockState s(n_sites_);
  int rem = n_particles_;
  for (int i = 0; i + 1 < n_modes_; ++i) {
    for (int v = rem; v >= 0; --v) {
      const std::uint64_t c = count(rem - v, n_modes_ - i - 1);
      if (r < c) {
        s.set_mode(i, v);
        rem -= v;
        break;
      }
      r -= c;
    }
  }
  s.set_mode(n_modes_ - 1, rem);
  return s;
}

std::vector<FockState> enumerate_fock(int n_particles, int n_sites,
                                      std::uint64_t max_dimension) {
  const std::uint64_t dim = full_dimension(n_particles, n_sites);
  if (dim > max_dimension)
    throw Error(Errc::dimension_too_large,
                "Fock dimension " + std::to_string(dim) + " exceeds cap " +
                    std::to_string(max_dimension));
  FockIndexer indexer(n_particles, n_sites);
  std::vector<FockState> out;
  out.reserve(dim);
  for (std::uint64_t r = 0; r < dim; ++r) out.push_back(indexer.unrank(r));
  return out;
}

FockState translate(const FockState& s) {
  const int L = s.n_sites();
  FockState out(L);
  for (int l = 0; l < L; ++l) {
    out.set_mode((l + 1) % L, s.lower(l));
    out.set_mode(L + (l + 1) % L, s.upper(l));
  }
  return out;
}

SymmetrySector::Location SymmetrySector::lookup(const FockState& s) const {
  const std::uint64_t r = indexer.rank(s);
  return {rep_of_rank[r], shift_of_rank[r]};
}

SymmetrySector build_k0_sector(int n_particles, int n_sites, std::uint64_t max_dimension) {
  const std::uint64_t dim = full_dimension(n_particles, n_sites);
  if (dim > max_dimension)
    throw Error(Errc::dimension_too_large,
                "Fock dimension " + std::to_string(dim) + " exceeds cap " +
                    std::to_string(max_dimension));

  SymmetrySector sec;
  sec.n_particles = n_particles;
  sec.n_sites = n_sites;
  sec.full_dimension = dim;
  sec.indexer = FockIndexer(n_particles, n_sites);
  sec.rep_of_rank.assign(dim, -1);
  sec.shift_of_rank.assign(dim, 0);

  // Ranks are visited in enumeration order, so the first member seen of
  // each orbit is its smallest-rank element and becomes the representative.
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (sec.rep_of_rank[r] >= 0) continue;
    const auto idx = static_cast<std::int32_t>(sec.representatives.size());
    const FockState rep = sec.indexer.unrank(r);
    sec.rep_of_rank[r] = idx;
    int size = 1;
    for (FockState s = translate(rep); s != rep; s = translate(s), ++size) {
      const std::uint64_t rs = sec.indexer.rank(s);
      sec.rep_of_rank[rs] = idx;
      sec.shift_of_rank[rs] = static_cast<std::int16_t>(size);
    }
    sec.representatives.push_back(rep);
    sec.orbit_sizes.push_back(size);
    sec.norms.push_back(std::sqrt(static_cast<double>(n_sites) / size));
  }
  return sec;
}

Eigen::VectorXd upper_number_diagonal(const SymmetrySector& sector) {
  Eigen::VectorXd d(sector.dimension());
  for (std::size_t r = 0; r < sector.dimension(); ++r)
    d[r] = sector.representatives[r].upper_total();
  return d;
}

Eigen::VectorXcd expand_to_full(const SymmetrySector& sector, const Eigen::VectorXcd& coords) {
  if (static_cast<std::size_t>(coords.size()) != sector.dimension())
    throw Error(Errc::dimension_mismatch, "coordinate vector does not match sector");
  Eigen::VectorXcd full(sector.full_dimension);
  for (std::uint64_t i = 0; i < sector.full_dimension; ++i) {
    const int r = sector.rep_of_rank[i];
    full[i] = coords[r] / std::sqrt(static_cast<double>(sector.orbit_sizes[r]));
  }
  return full;
}

InitialState parse_initial_state(const std::string& text) {
  if (text == "unit-filling-lower") return UnitFillingLower{};
  if (text == "lower-band-ground") return LowerBandGround{};
  if (text.rfind("fock:", 0) == 0) return ExplicitFock{FockState::parse(text.substr(5))};
  throw Error(Errc::unsupported_descriptor, "unknown initial state '" + text + "'");
}

std::string to_string(const InitialState& s) {
  if (std::holds_alternative<UnitFillingLower>(s)) return "unit-filling-lower";
  if (std::holds_alternative<LowerBandGround>(s)) return "lower-band-ground";
  const std::string ket = std::get<ExplicitFock>(s).state.to_string();
  return "fock:" + ket.substr(1, ket.size() - 2);
}

namespace {

// Ground state of -1/2 sum_l (a+_{l+1} a_l + h.c.) on the ring, restricted to
// states with an empty upper band. Positive hopping strength only rescales
// the spectrum, so the ground state does not depend on t_a.
Eigen::VectorXcd lower_band_ground(const SymmetrySector& sector) {
  const int L = sector.n_sites;
  std::vector<int> block;
  std::vector<int> position(sector.dimension(), -1);
  for (std::size_t r = 0; r < sector.dimension(); ++r) {
    if (sector.representatives[r].upper_total() == 0) {
      position[r] = static_cast<int>(block.size());
      block.push_back(static_cast<int>(r));
    }
  }
  const int nb = static_cast<int>(block.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nb, nb);
  if (L > 1) {
    for (int col = 0; col < nb; ++col) {
      const int r = block[col];
      const FockState& s = sector.representatives[r];
      for (int l = 0; l < L; ++l) {
        const int from = l;
        const int to = (l + 1) % L;
        for (auto [src, dst] : {std::pair{from, to}, std::pair{to, from}}) {
          const int n_src = s.lower(src);
          if (n_src == 0) continue;
          FockState t = s;
          t.set_mode(src, n_src - 1);
          t.set_mode(dst, t.lower(dst) + 1);
          const double amp = std::sqrt(double(n_src)) * std::sqrt(double(t.lower(dst)));
          const auto loc = sector.lookup(t);
          h(position[loc.index], col) +=
              -0.5 * amp * sector.norms[loc.index] / sector.norms[r];
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (v.sum() < 0.0) v = -v;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sector.dimension());
  for (int i = 0; i < nb; ++i) out[block[i]] = v[i];
  return out;
}

}  // namespace

Eigen::VectorXcd project_initial_state(const InitialState& desc, const SymmetrySector& sector) {
  const int N = sector.n_particles;
  const int L = sector.n_sites;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sector.dimension());

  if (std::holds_alternative<LowerBandGround>(desc)) {
    out = lower_band_ground(sector);
  } else {
    FockState s;
    if (std::holds_alternative<UnitFillingLower>(desc)) {
      if (N != L)
        throw Error(Errc::unsupported_descriptor,
                    "unit-filling-lower requires n_particles == n_sites");
      s = FockState(std::vector<int>(L, 1), std::vector<int>(L, 0));
    } else {
      s = std::get<ExplicitFock>(desc).state;
      if (s.n_sites() != L || s.total() != N)
        throw Error(Errc::dimension_mismatch,
                    "explicit Fock state " + s.to_string() + " does not belong to the sector");
    }
    // <R_r|s> = orbit_size^-1/2 for kappa = 0.
    const auto loc = sector.lookup(s);
    out[loc.index] = 1.0 / std::sqrt(double(sector.orbit_sizes[loc.index]));
  }

  const double norm = out.norm();
  if (!(norm > 1e-14))
    throw Error(Errc::projection_vanishes, "initial state has no kappa = 0 component");
  return out / norm;
}

}  // namespace starkband
