#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "starkband/error.hpp"
#include "starkband/kernels.hpp"
#include "starkband/runner.hpp"

using namespace starkband;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::config, "bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw Error(Errc::config, "empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tilted two-band Bose-Hubbard dynamics: inter-band oscillations, Floquet spectra, "
               "collapse and revival"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::optional<std::string> preset, params_file, initial, terms, mode, g_values, out, dump;
  std::optional<double> g, force, t_final_tb, rtol, atol, prominence;
  std::optional<int> order, n, l, sample_per_tb, window;

  app.add_option("command", command,
                 "dims | evolve | floquet-spectrum | revival-report | sweep-g | single-particle")
      ->required()
      ->check(CLI::IsMember({"dims", "evolve", "floquet-spectrum", "revival-report", "sweep-g",
                             "single-particle"}));
  auto* preset_opt = app.add_option("--preset", preset, "Named parameter set (v0_4)");
  app.add_option("--params", params_file, "JSON parameter file")->excludes(preset_opt);
  app.add_option("--g", g, "Interaction scale g (required with --preset)");
  app.add_option("--order", order, "Resonance order r");
  app.add_option("--force", force, "Stark force F");
  app.add_option("--n", n, "Particle number N");
  app.add_option("--l", l, "Sites per band L");
  app.add_option("--t-final-tb", t_final_tb, "Duration in Bloch periods");
  app.add_option("--sample-per-tb", sample_per_tb, "Samples per Bloch period (direct mode)");
  app.add_option("--terms", terms, "Hamiltonian terms: all, density-cross, or a comma list");
  app.add_option("--rtol", rtol, "Integrator relative tolerance");
  app.add_option("--atol", atol, "Integrator absolute tolerance");
  app.add_option("--out", out, "Output file (default: stdout)");
  app.add_option("--dump-matrix", dump, "Write the sector Hamiltonian blocks to this file");
  app.add_option("--initial-state", initial,
                 "unit-filling-lower | lower-band-ground | fock:<lower>;<upper>");
  app.add_option("--mode", mode, "evolve sampling: direct | stroboscopic");
  app.add_option("--prominence", prominence, "Revival prominence above the plateau");
  app.add_option("--g-values", g_values, "Comma list of g for sweep-g");
  app.add_option("--window", window, "Half width M of the single-particle site window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    kernels::configure_threads_from_env();
    const Command cmd = parse_command(command);

    RunConfig cfg;
    bool g_given = g.has_value();
    if (params_file) {
      const ParamsFile pf = load_params_file(*params_file);
      cfg.params = pf.params;
      cfg.resonance_order = pf.resonance_order;
      cfg.source = *params_file;
      g_given = true;
    } else {
      cfg.source = preset.value_or("v0_4");
      cfg.params = preset_by_name(cfg.source);
    }
    if (!g_given && cmd != Command::dims && cmd != Command::sweep_g)
      throw Error(Errc::config, "--g must be given explicitly with a preset");
    if (g) cfg.params.g = *g;
    if (order) cfg.resonance_order = *order;
    if (force) cfg.params.force = *force;
    if (n) cfg.params.n_particles = *n;
    if (l) cfg.params.n_sites = *l;
    if (initial) cfg.initial_state = parse_initial_state(*initial);
    if (terms) cfg.terms = *terms == "density-cross" ? TermMask::density_cross_only()
                                                     : TermMask::parse(*terms);
    if (mode) cfg.mode = parse_sample_mode(*mode);
    if (sample_per_tb) cfg.sample_per_tb = *sample_per_tb;
    if (rtol) cfg.integrator.rtol = *rtol;
    if (atol) cfg.integrator.atol = *atol;
    if (prominence) cfg.prominence = *prominence;
    if (g_values) cfg.g_values = parse_list(*g_values);
    if (window) cfg.window_half_width = *window;
    cfg.t_final_tb = t_final_tb;
    if (out) cfg.out = *out;
    if (dump) cfg.dump_matrix = *dump;

    run(cmd, cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
