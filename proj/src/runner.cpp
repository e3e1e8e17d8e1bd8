#include "starkband/runner.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "starkband/bessel.hpp"
#include "starkband/error.hpp"

namespace starkband {

namespace {

void set_precision(std::ostream& os) { os << std::setprecision(12); }

double tb_or(const RunConfig& cfg, double fallback) { return cfg.t_final_tb.value_or(fallback); }

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json opt_tb(const std::optional<double>& v, double t_bloch) {
  return v ? nlohmann::json(*v / t_bloch) : nlohmann::json(nullptr);
}

std::string collapse_label(CollapseStatus s) {
  switch (s) {
    case CollapseStatus::collapsed: return "collapsed";
    case CollapseStatus::never_collapsed: return "never_collapsed";
    case CollapseStatus::never_oscillated: return "never_oscillated";
  }
  return "unknown";
}

void write_trace_csv(std::ostream& os, const std::string& header, const OscillationTrace& tr,
                     double t_bloch) {
  os << header << "t,t_over_TB,Nb\n";
  set_precision(os);
  for (std::size_t i = 0; i < tr.size(); ++i)
    os << tr.times[i] << ',' << tr.times[i] / t_bloch << ',' << tr.values[i] << '\n';
}

void maybe_dump(const RunConfig& cfg, const HamiltonianParts& parts, std::ostream& out) {
  if (!cfg.dump_matrix) return;
  write_output(cfg.dump_matrix, [&](std::ostream& os) {
    os << header_lines(cfg, "dump-matrix") << "row,col,re,im\n";
    os << "# h_static\n" << dump_coordinates(parts.h_static);
    os << "# h_hop\n" << dump_coordinates(parts.h_hop);
  }, out);
}

void log_trace_summary(std::ostream& log, const OscillationTrace& tr, double t_bloch) {
  log << "peak N_b " << peak_value(tr) << '\n';
  try {
    log << "measured period " << measured_period(tr) / t_bloch << " T_B\n";
  } catch (const Error& e) {
    log << "measured period undefined (" << e.what() << ")\n";
  }
}

nlohmann::ordered_json report_json(const RevivalReport& r) {
  const double tb = r.t_bloch;
  nlohmann::ordered_json j;
  j["t_bloch"] = r.t_bloch;
  j["t_res_predicted"] = r.t_res_predicted;
  j["t_res_predicted_tb"] = r.t_res_predicted / tb;
  j["t_res_measured"] = opt_json(r.t_res_measured);
  j["t_res_measured_tb"] = opt_tb(r.t_res_measured, tb);
  j["envelope_window_tb"] = r.window / tb;
  j["envelope_window_source"] = r.window_measured ? "measured" : "predicted";
  j["collapse_status"] = collapse_label(r.collapse_status);
  j["t_coll_measured"] = opt_json(r.t_coll_measured);
  j["t_coll_measured_tb"] = opt_tb(r.t_coll_measured, tb);
  j["t_rev_measured"] = opt_json(r.t_rev_measured);
  j["t_rev_measured_tb"] = opt_tb(r.t_rev_measured, tb);
  j["revival_fwhm"] = opt_json(r.revival_fwhm);
  j["revival_fwhm_tb"] = opt_tb(r.revival_fwhm, tb);
  j["t_rev_eq9"] = opt_json(r.t_rev_eq9);
  j["t_rev_eq9_tb"] = opt_tb(r.t_rev_eq9, tb);
  j["t_rev_eq10"] = opt_json(r.t_rev_eq10);
  j["t_rev_eq10_tb"] = opt_tb(r.t_rev_eq10, tb);
  j["omega_12"] = opt_json(r.omega_12);
  j["omega_23"] = opt_json(r.omega_23);
  j["delta_n"] = opt_json(r.delta_n);
  j["ratio"] = opt_json(r.ratio);
  j["t_coll_from_delta_n"] = opt_json(r.t_coll_from_width);
  j["t_coll_from_delta_n_tb"] = opt_tb(r.t_coll_from_width, tb);
  j["unitarity_defect"] = r.unitarity_defect;
  return j;
}

std::string csv_value(const std::optional<double>& v) {
  if (!v) return "nan";
  std::ostringstream ss;
  set_precision(ss);
  ss << *v;
  return ss.str();
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "dims") return Command::dims;
  if (name == "evolve") return Command::evolve;
  if (name == "floquet-spectrum") return Command::floquet_spectrum;
  if (name == "revival-report") return Command::revival_report;
  if (name == "sweep-g") return Command::sweep_g;
  if (name == "single-particle") return Command::single_particle;
  throw Error(Errc::config, "unknown subcommand '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::dims: return "dims";
    case Command::evolve: return "evolve";
    case Command::floquet_spectrum: return "floquet-spectrum";
    case Command::revival_report: return "revival-report";
    case Command::sweep_g: return "sweep-g";
    case Command::single_particle: return "single-particle";
  }
  return "unknown";
}

RevivalRun run_revival(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  RevivalRun r;
  r.sector = build_k0_sector(p.n_particles, p.n_sites);
  const HamiltonianParts parts = build_interaction_picture(p, r.sector, cfg.terms);
  const Eigen::VectorXcd psi0 = project_initial_state(cfg.initial_state, r.sector);
  const FloquetOperator uf = floquet_operator(parts, cfg.integrator);
  r.spectrum = diagonalize_floquet(uf.u, uf.t_bloch, psi0);
  r.spectrum.unitarity_defect = uf.unitarity_defect;
  const auto m_count = static_cast<std::size_t>(std::floor(tb_or(cfg, kDefaultRevivalTb))) + 1;
  r.trace = occupation_series_stroboscopic(r.spectrum, r.sector, m_count);
  r.trace.meta = p.fingerprint();
  r.report = make_revival_report(r.trace, r.spectrum, p, cfg.order(), cfg.prominence);
  return r;
}

SingleParticleTrace run_single_particle(const RunConfig& cfg) {
  ModelParams p = cfg.params;
  p.n_particles = 1;
  const int m_half = cfg.window_half_width;
  const SingleParticleModel model = build_single_particle_transformed(p, m_half);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.h);
  if (es.info() != Eigen::Success)
    throw Error(Errc::integration_failure, "single-particle diagonalisation failed");

  const Eigen::Index width = 2 * m_half + 1;
  const double x_a = p.t_a / p.force;
  Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(2 * width);
  for (int n = -m_half; n <= m_half; ++n) psi0[n + m_half] = bessel_j(-n, x_a);
  psi0.normalize();
  const Eigen::VectorXd overlap = es.eigenvectors().transpose() * psi0;

  const double t_bloch = bloch_period(p);
  const double dt = t_bloch / cfg.sample_per_tb;
  const auto steps = static_cast<long>(std::llround(tb_or(cfg, kDefaultSingleParticleTb) *
                                                    cfg.sample_per_tb));
  const TwoLevelModel two = build_resonant_two_level(p, cfg.order());

  SingleParticleTrace out;
  out.edge_coupling = model.edge_coupling;
  out.window_too_small = model.window_too_small;
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::MatrixXd upper = v.bottomRows(width);
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    Eigen::VectorXcd phased(overlap.size());
    for (Eigen::Index i = 0; i < overlap.size(); ++i)
      phased[i] = overlap[i] * std::polar(1.0, -es.eigenvalues()[i] * t);
    const double nb = (upper.cast<std::complex<double>>() * phased).squaredNorm();
    out.model.push(t, nb);
    out.rabi.push_back(rabi_occupation(t, p));
    out.two_level.push_back(two.occupation(t));
  }
  out.model.meta = p.fingerprint();
  return out;
}

void run(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  const std::string header = header_lines(cfg, to_string(command));

  switch (command) {
    case Command::dims: {
      const std::uint64_t full = full_dimension(p.n_particles, p.n_sites);
      const SymmetrySector sector = build_k0_sector(p.n_particles, p.n_sites);
      write_output(cfg.out, [&](std::ostream& os) {
        os << "# dims {\"n_particles\":" << p.n_particles << ",\"n_sites\":" << p.n_sites
           << "}\n";
        os << "N,L,dim_full,dim_k0\n";
        os << p.n_particles << ',' << p.n_sites << ',' << full << ',' << sector.dimension()
           << '\n';
      }, out);
      return;
    }

    case Command::evolve: {
      const SymmetrySector sector = build_k0_sector(p.n_particles, p.n_sites);
      const HamiltonianParts parts = build_interaction_picture(p, sector, cfg.terms);
      maybe_dump(cfg, parts, out);
      const Eigen::VectorXcd psi0 = project_initial_state(cfg.initial_state, sector);
      const double t_bloch = parts.t_bloch();
      const double t_final_tb = tb_or(cfg, kDefaultEvolveTb);
      OscillationTrace tr;
      if (cfg.mode == SampleMode::direct) {
        EvolveResult res;
        tr = occupation_series_direct(psi0, parts, sector, t_final_tb * t_bloch,
                                      t_bloch / cfg.sample_per_tb, cfg.integrator, &res);
        log << "norm drift " << res.norm_drift << ", steps " << res.stats.accepted << '\n';
      } else {
        const FloquetOperator uf = floquet_operator(parts, cfg.integrator);
        const FloquetSpectrum s = diagonalize_floquet(uf.u, uf.t_bloch, psi0);
        log << "unitarity defect " << uf.unitarity_defect << '\n';
        tr = occupation_series_stroboscopic(
            s, sector, static_cast<std::size_t>(std::floor(t_final_tb)) + 1);
      }
      log_trace_summary(log, tr, t_bloch);
      write_output(cfg.out, [&](std::ostream& os) {
        write_trace_csv(os, header + "# mode " + to_string(cfg.mode) + "\n", tr, t_bloch);
      }, out);
      return;
    }

    case Command::floquet_spectrum: {
      const SymmetrySector sector = build_k0_sector(p.n_particles, p.n_sites);
      const HamiltonianParts parts = build_interaction_picture(p, sector, cfg.terms);
      maybe_dump(cfg, parts, out);
      const Eigen::VectorXcd psi0 = project_initial_state(cfg.initial_state, sector);
      const FloquetOperator uf = floquet_operator(parts, cfg.integrator);
      const FloquetSpectrum s = diagonalize_floquet(uf.u, uf.t_bloch, psi0);
      const std::vector<CoefficientCluster> clusters = aggregate_coefficients(s);
      log << "unitarity defect " << uf.unitarity_defect << ", " << clusters.size()
          << " quasi-energy clusters\n";
      write_output(cfg.out, [&](std::ostream& os) {
        os << header << "# unitarity_defect " << uf.unitarity_defect << '\n';
        os << "eps_n,abs_cn,members\n";
        set_precision(os);
        for (const auto& c : clusters)
          os << c.quasi_energy << ',' << c.abs_c() << ',' << c.members << '\n';
      }, out);
      return;
    }

    case Command::revival_report: {
      if (cfg.dump_matrix) {
        const SymmetrySector sector = build_k0_sector(p.n_particles, p.n_sites);
        maybe_dump(cfg, build_interaction_picture(p, sector, cfg.terms), out);
      }
      const RevivalRun r = run_revival(cfg);
      nlohmann::ordered_json j = report_json(r.report);
      j["order"] = cfg.order();
      j["t_final_tb"] = tb_or(cfg, kDefaultRevivalTb);
      j["params"] = nlohmann::ordered_json::parse(p.fingerprint());
      write_output(cfg.out, [&](std::ostream& os) {
        os << header << j.dump(2) << '\n';
      }, out);
      return;
    }

    case Command::sweep_g: {
      std::vector<std::pair<double, double>> coll_pts, rev_pts;
      std::vector<std::string> rows;
      double t_bloch = bloch_period(p);
      for (double g : cfg.g_values) {
        RunConfig point = cfg;
        point.params.g = g;
        log << "g = " << g << " ..." << std::endl;
        const RevivalReport r = run_revival(point).report;
        t_bloch = r.t_bloch;
        if (r.t_coll_measured) coll_pts.emplace_back(g, *r.t_coll_measured);
        if (r.t_rev_measured) rev_pts.emplace_back(g, *r.t_rev_measured);
        auto tb = [&](const std::optional<double>& v) {
          return v ? std::optional<double>(*v / t_bloch) : std::nullopt;
        };
        std::ostringstream row;
        set_precision(row);
        row << g << ',' << 1.0 / g << ',' << csv_value(r.t_coll_measured) << ','
            << csv_value(r.t_rev_measured) << ',' << csv_value(r.t_rev_eq9) << ','
            << csv_value(r.t_rev_eq10) << ',' << csv_value(tb(r.t_coll_measured)) << ','
            << csv_value(tb(r.t_rev_measured)) << ',' << csv_value(tb(r.t_rev_eq9)) << ','
            << csv_value(tb(r.t_rev_eq10));
        rows.push_back(row.str());
      }
      std::string fits;
      for (const auto& [name, pts] : {std::pair{"t_coll", &coll_pts}, std::pair{"t_rev", &rev_pts}}) {
        if (pts->size() < 3) continue;
        try {
          const InverseGFit f = fit_inverse_g(*pts);
          std::ostringstream ss;
          set_precision(ss);
          ss << "# fit " << name << " = slope/g + intercept: slope " << f.slope << " intercept "
             << f.intercept << " max_relative_residual " << f.max_relative_residual << '\n';
          fits += ss.str();
        } catch (const Error&) {
        }
      }
      log << fits;
      write_output(cfg.out, [&](std::ostream& os) {
        os << header;
        os << "g,inv_g,t_coll,t_rev,t_rev_eq9,t_rev_eq10,t_coll_tb,t_rev_tb,t_rev_eq9_tb,"
              "t_rev_eq10_tb\n";
        for (const auto& row : rows) os << row << '\n';
        os << fits;
      }, out);
      return;
    }

    case Command::single_particle: {
      const SingleParticleTrace sp = run_single_particle(cfg);
      const double t_bloch = bloch_period(p);
      if (sp.window_too_small)
        log << "warning: site window too small, edge coupling " << sp.edge_coupling << '\n';
      log_trace_summary(log, sp.model, t_bloch);
      write_output(cfg.out, [&](std::ostream& os) {
        os << header << "t,t_over_TB,Nb,rabi,two_level\n";
        set_precision(os);
        for (std::size_t i = 0; i < sp.model.size(); ++i)
          os << sp.model.times[i] << ',' << sp.model.times[i] / t_bloch << ','
             << sp.model.values[i] << ',' << sp.rabi[i] << ',' << sp.two_level[i] << '\n';
      }, out);
      return;
    }
  }
}

}  // namespace starkband
