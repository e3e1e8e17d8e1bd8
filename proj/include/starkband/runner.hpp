#pragma once

#include <iosfwd>
#include <string>

#include "starkband/analysis.hpp"
#include "starkband/config.hpp"

namespace starkband {

enum class Command { dims, evolve, floquet_spectrum, revival_report, sweep_g, single_particle };

Command parse_command(const std::string& name);
std::string to_string(Command c);

inline constexpr double kDefaultEvolveTb = 600.0;
inline constexpr double kDefaultRevivalTb = 12000.0;
inline constexpr double kDefaultSingleParticleTb = 600.0;

// Floquet pipeline behind revival-report and sweep-g.
struct RevivalRun {
  SymmetrySector sector;
  FloquetSpectrum spectrum;
  OscillationTrace trace;
  RevivalReport report;
};
RevivalRun run_revival(const RunConfig& cfg);

// Single-particle model evolved exactly from the lower-band Wannier state
// at site 0; columns t, N_b, Rabi formula, resonant two-level prediction.
struct SingleParticleTrace {
  OscillationTrace model;
  std::vector<double> rabi;
  std::vector<double> two_level;
  double edge_coupling = 0.0;
  bool window_too_small = false;
};
SingleParticleTrace run_single_particle(const RunConfig& cfg);

// Runs one subcommand. Artifacts go to cfg.out (or `out`), progress and
// summaries to `log`. Throws Error on failure.
void run(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace starkband
