#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "starkband/error.hpp"
#include "starkband/fock.hpp"

using namespace starkband;

namespace {

// C(n, k) in floating point; exact for the sizes used here.
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Orbit count of the cyclic group on 2-band configurations (Burnside).
double burnside_orbits(int n, int l) {
  double total = 0.0;
  for (int j = 0; j < l; ++j) {
    const int cycles = std::gcd(j, l);
    const int cycle_len = l / cycles;
    if (n % cycle_len) continue;
    const int per_cycle = n / cycle_len;
    total += binom(per_cycle + 2 * cycles - 1, 2 * cycles - 1);
  }
  return total / l;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("full_dimension") {
  CHECK(full_dimension(5, 5) == 2002);
  CHECK(full_dimension(1, 3) == 6);
  CHECK(full_dimension(0, 4) == 1);
  for (int n = 1; n <= 8; ++n)
    for (int l = 2; l <= 7; ++l)
      CHECK(static_cast<double>(full_dimension(n, l)) == binom(n + 2 * l - 1, n));
  CHECK_THROWS_AS(full_dimension(120, 60), Error);
}

TEST_CASE("FockState text round trip") {
  const FockState s({1, 0, 2}, {0, 1, 1});
  CHECK(s.to_string() == "|1,0,2;0,1,1>");
  CHECK(FockState::parse("1,0,2;0,1,1") == s);
  CHECK(FockState::parse("|1,0,2;0,1,1>") == s);
  CHECK(s.total() == 5);
  CHECK(s.upper_total() == 2);
  CHECK_THROWS_AS(FockState::parse("1,0;1"), Error);
  CHECK_THROWS_AS(FockState::parse("x,0;1,0"), Error);
}

TEST_CASE("enumeration order and ranking") {
  const auto basis = enumerate_fock(3, 3);
  REQUIRE(basis.size() == full_dimension(3, 3));
  CHECK(basis.front() == FockState({3, 0, 0}, {0, 0, 0}));
  CHECK(basis.back() == FockState({0, 0, 0}, {0, 0, 3}));
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1] > basis[i]);
  const FockIndexer idx(3, 3);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(idx.rank(basis[i]) == i);
    CHECK(idx.unrank(i) == basis[i]);
  }
  CHECK_THROWS_AS(enumerate_fock(7, 7, 1000), Error);
}

TEST_CASE("translate cycles with period L") {
  FockState s({2, 0, 1, 0}, {0, 1, 0, 1});
  const FockState t = translate(s);
  CHECK(t == FockState({0, 2, 0, 1}, {1, 0, 1, 0}));
  FockState u = s;
  for (int i = 0; i < 4; ++i) u = translate(u);
  CHECK(u == s);
}

TEST_CASE("sector dimensions match the published values") {
  CHECK(build_k0_sector(4, 4).dimension() == 86);
  CHECK(build_k0_sector(5, 5).dimension() == 402);
  CHECK(build_k0_sector(6, 7).dimension() == 3876);
  CHECK(build_k0_sector(7, 7).dimension() == 11076);
}

TEST_CASE("sector dimension equals the Burnside orbit count") {
  for (int n = 1; n <= 6; ++n)
    for (int l = 2; l <= 6; ++l) {
      CAPTURE(n);
      CAPTURE(l);
      const SymmetrySector s = build_k0_sector(n, l);
      CHECK(static_cast<double>(s.dimension()) == burnside_orbits(n, l));
      const long covered = std::accumulate(s.orbit_sizes.begin(), s.orbit_sizes.end(), 0L);
      CHECK(static_cast<std::uint64_t>(covered) == s.full_dimension);
      for (std::size_t r = 0; r < s.dimension(); ++r) {
        CHECK(l % s.orbit_sizes[r] == 0);
        CHECK(s.norms[r] == doctest::Approx(std::sqrt(double(l) / s.orbit_sizes[r])));
      }
    }
}

TEST_CASE("lookup finds the orbit and shift of every state") {
  const SymmetrySector s = build_k0_sector(3, 4);
  for (const FockState& st : enumerate_fock(3, 4)) {
    const auto loc = s.lookup(st);
    FockState t = s.representatives[loc.index];
    for (int j = 0; j < loc.shift; ++j) t = translate(t);
    CHECK(t == st);
  }
}

TEST_CASE("expanded sector vectors are normalised and translation invariant") {
  const SymmetrySector s = build_k0_sector(3, 4);
  const auto basis = enumerate_fock(3, 4);
  const FockIndexer idx(3, 4);
  for (std::size_t r = 0; r < s.dimension(); ++r) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(s.dimension());
    c[r] = 1.0;
    const Eigen::VectorXcd full = expand_to_full(s, c);
    CHECK(full.norm() == doctest::Approx(1.0));
    for (std::size_t i = 0; i < basis.size(); ++i)
      CHECK(std::abs(full[idx.rank(translate(basis[i]))] - full[i]) < 1e-15);
  }
}

TEST_CASE("upper number diagonal matches the full basis expectation") {
  const SymmetrySector s = build_k0_sector(4, 3);
  const auto basis = enumerate_fock(4, 3);
  const Eigen::VectorXd diag = upper_number_diagonal(s);
  Eigen::VectorXcd c = Eigen::VectorXcd::Random(s.dimension());
  c.normalize();
  const Eigen::VectorXcd full = expand_to_full(s, c);
  double full_nb = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) full_nb += std::norm(full[i]) * basis[i].upper_total();
  const double sector_nb = (c.cwiseAbs2().array() * diag.array()).sum();
  CHECK(sector_nb == doctest::Approx(full_nb).epsilon(1e-12));
}

TEST_CASE("initial state descriptors") {
  CHECK(std::holds_alternative<UnitFillingLower>(parse_initial_state("unit-filling-lower")));
  CHECK(std::holds_alternative<LowerBandGround>(parse_initial_state("lower-band-ground")));
  const InitialState e = parse_initial_state("fock:1,0;0,1");
  REQUIRE(std::holds_alternative<ExplicitFock>(e));
  CHECK(to_string(e) == "fock:1,0;0,1");
  CHECK_THROWS_AS(parse_initial_state("coherent"), Error);
}

TEST_CASE("unit filling projects onto a single orbit") {
  const SymmetrySector s = build_k0_sector(5, 5);
  const Eigen::VectorXcd v = project_initial_state(UnitFillingLower{}, s);
  CHECK(v.norm() == doctest::Approx(1.0));
  const auto loc = s.lookup(FockState({1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}));
  CHECK(std::abs(v[loc.index]) == doctest::Approx(1.0));
  CHECK_THROWS_AS(project_initial_state(UnitFillingLower{}, build_k0_sector(3, 4)), Error);
}

TEST_CASE("explicit Fock state projects onto its orbit sum") {
  const SymmetrySector s = build_k0_sector(2, 2);
  const Eigen::VectorXcd v = project_initial_state(parse_initial_state("fock:1,0;0,1"), s);
  const Eigen::VectorXcd full = expand_to_full(s, v);
  const FockIndexer idx(2, 2);
  CHECK(std::abs(full[idx.rank(FockState({1, 0}, {0, 1}))]) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(full[idx.rank(FockState({0, 1}, {1, 0}))]) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(project_initial_state(parse_initial_state("fock:1,0,0;0,0,1"), s), Error);
  CHECK_THROWS_AS(project_initial_state(parse_initial_state("fock:2,0;0,1"), s), Error);
}

TEST_CASE("lower-band ground state is the k = 0 condensate") {
  for (auto [n, l] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{4, 4}}) {
    const SymmetrySector s = build_k0_sector(n, l);
    const Eigen::VectorXcd full = expand_to_full(s, project_initial_state(LowerBandGround{}, s));
    const FockIndexer idx(n, l);
    // (a_{k=0}^dagger)^N / sqrt(N!) |0> with a_{k=0} = L^-1/2 sum_l a_l.
    double overlap = 0.0;
    for (const FockState& st : enumerate_fock(n, l)) {
      if (st.upper_total() != 0) continue;
      double amp = std::sqrt(factorial(n)) * std::pow(double(l), -0.5 * n);
      for (int i = 0; i < l; ++i) amp /= std::sqrt(factorial(st.lower(i)));
      overlap += amp * full[idx.rank(st)].real();
    }
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

}  // TEST_SUITE
