#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starkband/fock.hpp"
#include "starkband/hamiltonian.hpp"
#include "starkband/integrator.hpp"
#include "starkband/model.hpp"

namespace starkband {

enum class SampleMode { direct, stroboscopic };

SampleMode parse_sample_mode(const std::string& text);
std::string to_string(SampleMode m);

// Fully resolved settings of one CLI invocation.
struct RunConfig {
  ModelParams params;
  std::string source;  // preset name or parameter file path
  std::optional<int> resonance_order;
  InitialState initial_state = UnitFillingLower{};
  std::optional<double> t_final_tb;  // subcommand default when empty
  SampleMode mode = SampleMode::direct;
  int sample_per_tb = 32;
  TermMask terms = TermMask::all();
  IntegratorOptions integrator;
  double prominence = 0.05;
  std::vector<double> g_values{0.05, 0.1, 0.15, 0.2};
  int window_half_width = 10;  // single-particle site window M
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> dump_matrix;

  // Resonance order used for predictions: the explicit one, else the
  // nearest to delta_tilde / F.
  int order() const;
  void validate() const;
};

// Strict JSON parameter file: keys delta, c0, t_a, t_b, w_a, w_b, w_x, g,
// force, n_particles, n_sites, plus optional resonance_order. force may be
// omitted only when resonance_order is given, in which case it is set to
// the resonant force. Unknown or missing keys are rejected.
struct ParamsFile {
  ModelParams params;
  std::optional<int> resonance_order;
};
ParamsFile parse_params_json(const std::string& text);
ParamsFile load_params_file(const std::filesystem::path& path);

ModelParams preset_by_name(const std::string& name);

// Comment lines (each starting with '#') that describe a run.
std::string header_lines(const RunConfig& cfg, const std::string& command);

// Writes through a temporary file in the target directory and renames it
// into place, so the target is either complete or untouched. Without a
// path, the content goes to `fallback`.
void write_output(const std::optional<std::filesystem::path>& path,
                  const std::function<void(std::ostream&)>& writer, std::ostream& fallback);

}  // namespace starkband
