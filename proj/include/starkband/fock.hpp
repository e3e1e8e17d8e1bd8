#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace starkband {

// Occupation-number state |n_1^a..n_L^a; n_1^b..n_L^b>. Modes are stored
// lower band first, so mode l is a_l and mode L + l is b_l.
class FockState {
 public:
  FockState() = default;
  explicit FockState(int n_sites) : n_sites_(n_sites), modes_(2 * n_sites, 0) {}
  FockState(const std::vector<int>& lower, const std::vector<int>& upper);

  int n_sites() const { return n_sites_; }
  int n_modes() const { return 2 * n_sites_; }

  int lower(int l) const { return modes_[l]; }
  int upper(int l) const { return modes_[n_sites_ + l]; }
  int mode(int m) const { return modes_[m]; }
  void set_mode(int m, int n) { modes_[m] = static_cast<std::uint8_t>(n); }

  int total() const;
  int upper_total() const;

  std::span<const std::uint8_t> modes() const { return modes_; }

  // "|1,0;0,1>" style rendering.
  std::string to_string() const;
  // Parses "1,0;0,1" (brackets optional).
  static FockState parse(const std::string& text);

  auto operator<=>(const FockState&) const = default;

 private:
  int n_sites_ = 0;
  std::vector<std::uint8_t> modes_;
};

// (N + 2L - 1)! / (N! (2L - 1)!). Throws Error(overflow) past 2^64 - 1.
std::uint64_t full_dimension(int n_particles, int n_sites);

// Combinatorial ranking of Fock states in enumeration order (descending
// lexicographic on the mode list, so |N,0..> has rank 0).
class FockIndexer {
 public:
  FockIndexer() = default;
  FockIndexer(int n_particles, int n_sites);

  std::uint64_t size() const { return size_; }
  std::uint64_t rank(const FockState& s) const;
  FockState unrank(std::uint64_t r) const;

 private:
  // Number of ways to put n bosons into m modes.
  std::uint64_t count(int n, int m) const { return table_[n * (n_modes_ + 1) + m]; }

  int n_particles_ = 0;
  int n_sites_ = 0;
  int n_modes_ = 0;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> table_;
};

inline constexpr std::uint64_t kDefaultMaxDimension = 5'000'000;

std::vector<FockState> enumerate_fock(int n_particles, int n_sites,
                                      std::uint64_t max_dimension = kDefaultMaxDimension);

// Cyclic shift l -> l + 1 (mod L) on both bands.
FockState translate(const FockState& s);

// kappa = 0 translation sector. Basis vector r is the normalised orbit sum
// |R_r> = orbit_size^-1/2 sum_j T^j |rep_r>.
struct SymmetrySector {
  int n_particles = 0;
  int n_sites = 0;
  int kappa = 0;
  std::uint64_t full_dimension = 0;

  std::vector<FockState> representatives;
  std::vector<int> orbit_sizes;
  // sqrt(L / orbit_size): the ratio norms[r'] / norms[r] is the factor
  // sqrt(s_r / s_r') picked up by translation-invariant matrix elements.
  std::vector<double> norms;

  struct Location {
    int index;  // representative
    int shift;  // state == translate^shift(representative)
  };
  Location lookup(const FockState& s) const;

  std::size_t dimension() const { return representatives.size(); }

  FockIndexer indexer;
  std::vector<std::int32_t> rep_of_rank;
  std::vector<std::int16_t> shift_of_rank;
};

SymmetrySector build_k0_sector(int n_particles, int n_sites,
                               std::uint64_t max_dimension = kDefaultMaxDimension);

// Diagonal of sum_l n_l^b in sector coordinates.
Eigen::VectorXd upper_number_diagonal(const SymmetrySector& sector);

// Expands sector coordinates into the full Fock basis (indexer order).
Eigen::VectorXcd expand_to_full(const SymmetrySector& sector,
                                const Eigen::VectorXcd& coords);

struct UnitFillingLower {};
struct LowerBandGround {};
struct ExplicitFock {
  FockState state;
};
using InitialState = std::variant<UnitFillingLower, LowerBandGround, ExplicitFock>;

// Accepts "unit-filling-lower", "lower-band-ground" or "fock:<n..;n..>".
InitialState parse_initial_state(const std::string& text);
std::string to_string(const InitialState& s);

Eigen::VectorXcd project_initial_state(const InitialState& desc,
                                       const SymmetrySector& sector);

}  // namespace starkband
