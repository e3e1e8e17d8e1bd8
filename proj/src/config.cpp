#include "starkband/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "starkband/error.hpp"

namespace starkband {

namespace fs = std::filesystem;

SampleMode parse_sample_mode(const std::string& text) {
  if (text == "direct") return SampleMode::direct;
  if (text == "stroboscopic") return SampleMode::stroboscopic;
  throw Error(Errc::config, "unknown mode '" + text + "' (direct or stroboscopic)");
}

std::string to_string(SampleMode m) {
  return m == SampleMode::direct ? "direct" : "stroboscopic";
}

int RunConfig::order() const {
  return resonance_order ? *resonance_order : nearest_resonance_order(params);
}

void RunConfig::validate() const {
  params.validate();
  if (resonance_order && *resonance_order < 1)
    throw Error(Errc::config, "resonance order must be a positive integer");
  if (t_final_tb && !(*t_final_tb > 0.0)) throw Error(Errc::config, "t_final_tb must be > 0");
  if (sample_per_tb < 1) throw Error(Errc::config, "sample_per_tb must be >= 1");
  if (!(integrator.rtol > 0.0) || !(integrator.atol > 0.0))
    throw Error(Errc::config, "tolerances must be > 0");
  if (!(prominence > 0.0) || prominence >= 1.0)
    throw Error(Errc::config, "prominence must lie in (0, 1)");
  if (window_half_width < 1) throw Error(Errc::config, "site window must be >= 1");
  for (double g : g_values)
    if (!(g > 0.0)) throw Error(Errc::config, "sweep values of g must be > 0");
}

ParamsFile parse_params_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::config, std::string("parameter file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::config, "parameter file must hold a JSON object");

  static const std::set<std::string> allowed{"delta", "c0",    "t_a",   "t_b",
                                             "w_a",   "w_b",   "w_x",   "g",
                                             "force", "n_particles", "n_sites",
                                             "resonance_order"};
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw Error(Errc::config, "unknown parameter key '" + key + "'");

  auto number = [&](const char* key) {
    if (!j.contains(key)) throw Error(Errc::config, std::string("missing parameter '") + key + "'");
    if (!j[key].is_number())
      throw Error(Errc::config, std::string("parameter '") + key + "' must be a number");
    return j[key].get<double>();
  };
  auto integer = [&](const char* key) {
    if (!j[key].is_number_integer())
      throw Error(Errc::config, std::string("parameter '") + key + "' must be an integer");
    return j[key].get<int>();
  };

  ParamsFile out;
  ModelParams& p = out.params;
  p.delta = number("delta");
  p.c0 = number("c0");
  p.t_a = number("t_a");
  p.t_b = number("t_b");
  p.w_a = number("w_a");
  p.w_b = number("w_b");
  p.w_x = number("w_x");
  p.g = number("g");
  number("n_particles");
  number("n_sites");
  p.n_particles = integer("n_particles");
  p.n_sites = integer("n_sites");
  if (j.contains("resonance_order")) out.resonance_order = integer("resonance_order");

  const bool has_force = j.contains("force");
  if (has_force == out.resonance_order.has_value())
    throw Error(Errc::config, "give exactly one of 'force' and 'resonance_order'");
  p.force = has_force ? number("force") : resonant_force(p.delta, p.c0, *out.resonance_order);
  p.validate();
  return out;
}

ParamsFile load_params_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot open parameter file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params_json(ss.str());
}

ModelParams preset_by_name(const std::string& name) {
  if (name == "v0_4") return preset_v0_4();
  throw Error(Errc::config, "unknown preset '" + name + "' (available: v0_4)");
}

std::string header_lines(const RunConfig& cfg, const std::string& command) {
  nlohmann::ordered_json run;
  run["command"] = command;
  run["source"] = cfg.source;
  run["order"] = cfg.order();
  run["initial_state"] = to_string(cfg.initial_state);
  run["terms"] = cfg.terms.to_string();
  run["rtol"] = cfg.integrator.rtol;
  run["atol"] = cfg.integrator.atol;
  std::string out = "# params " + cfg.params.fingerprint() + "\n";
  out += "# run " + run.dump() + "\n";
  return out;
}

void write_output(const std::optional<fs::path>& path,
                  const std::function<void(std::ostream&)>& writer, std::ostream& fallback) {
  if (!path) {
    writer(fallback);
    fallback.flush();
    return;
  }
  fs::path tmp = *path;
  tmp += ".partial";
  try {
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw Error(Errc::config, "cannot write " + tmp.string());
      writer(f);
      f.flush();
      if (!f) throw Error(Errc::config, "write failed for " + tmp.string());
    }
    fs::rename(tmp, *path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

}  // namespace starkband
