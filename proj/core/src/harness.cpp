#include "squidbec/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>

#include "squidbec/bec_coupling.hpp"
#include "squidbec/constants.hpp"
#include "squidbec/errors.hpp"
#include "squidbec/hybrid_dynamics.hpp"
#include "squidbec/loop_field.hpp"
#include "squidbec/squid_circuit.hpp"
#include "squidbec/tomography.hpp"

namespace squidbec {

namespace fs = std::filesystem;
using KV = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ArtifactSet::ArtifactSet(std::string dir) : dir_(std::move(dir)) {}

ArtifactSet::~ArtifactSet() {
  if (committed_) return;
  for (const auto& f : files_) {
    std::error_code ec;
    fs::remove(f, ec);
  }
}

std::string ArtifactSet::path(const std::string& filename) {
  std::string full = (fs::path(dir_) / filename).string();
  files_.push_back(full);
  return full;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  bool ok = std::fprintf(f, "%s\n", header.c_str()) >= 0;
  for (const auto& row : rows) {
    for (std::size_t i = 0; ok && i < row.size(); ++i) {
      ok = std::fprintf(f, "%s%.17g", i ? "," : "", row[i]) >= 0;
    }
    ok = ok && std::fprintf(f, "\n") >= 0;
  }
  ok = ok && std::fflush(f) == 0 && !std::ferror(f);
  std::fclose(f);
  if (!ok) throw IoError("write failed for '" + path + "'");
}

void write_report(const std::string& path, const KV& kv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string resolve_out_dir(const CliInvocation& inv, const RunConfig& cfg) {
  if (inv.out_dir) return *inv.out_dir;
  if (const char* env = std::getenv(kOutDirEnvVar); env && *env) return env;
  return cfg.output.dir;
}

namespace {

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SquidParams squid_params(const RunConfig& c) {
  return SquidParams(c.squid.inductance, c.squid.capacitance,
                     c.squid.critical_current, c.squid.phi_ex);
}

LoopGeometry loop_geometry(const RunConfig& c) {
  return LoopGeometry(c.loop.radius, c.loop.wire_radius, c.loop.center,
                      c.loop.axis);
}

// Moment vectors are configured in the loop frame (z along the loop axis)
// in Bohr magnetons; map them onto the lab triad.
Eigen::Vector3cd moment_to_lab(const Eigen::Vector3cd& m,
                               const LoopGeometry& g) {
  return kBohrMagneton * (m(0) * g.e1.cast<std::complex<double>>() +
                          m(1) * g.e2.cast<std::complex<double>>() +
                          m(2) * g.axis.cast<std::complex<double>>());
}

BecParams bec_params(const RunConfig& c, const LoopGeometry& g) {
  const MomentMatrix m(moment_to_lab(c.bec.mu_uu.cast<std::complex<double>>(), g),
                       moment_to_lab(c.bec.mu_dd.cast<std::complex<double>>(), g),
                       moment_to_lab(c.bec.mu_du, g));
  return BecParams(c.bec.atom_number, c.bec.trap_frequency, c.bec.atom_mass,
                   c.bec.trap_center, c.bec.e_hfs, m);
}

double loop_current(const RunConfig& c) {
  if (c.loop.current) return *c.loop.current;
  return analyze_double_well(squid_params(c)).circulating_current;
}

struct Stage {
  const RunConfig& cfg;
  ArtifactSet& art;
  KV derived;

  void note(const std::string& k, double v) {
    derived.emplace_back(k, format_double(v));
  }
  void note(const std::string& k, const std::string& v) {
    derived.emplace_back(k, v);
  }
};

DoubleWellAnalysis run_squid_analyze(Stage& st) {
  const SquidParams p = squid_params(st.cfg);
  const DoubleWellAnalysis a = analyze_double_well(p);

  std::vector<std::vector<double>> rows;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double phi = p.phi_ex - 1.0 + 2.0 * i / (n - 1);
    rows.push_back({phi, reduced_potential(phi, p.phi_ex, p.beta_L())});
  }
  write_csv(st.art.path("potential.csv"), "phi,u_over_u0", rows);

  KV kv;
  kv.emplace_back("beta_L", format_double(p.beta_L()));
  kv.emplace_back("u0_joule", format_double(p.u0()));
  kv.emplace_back("phi_min_left", format_double(a.phi_min_left));
  kv.emplace_back("phi_min_right", format_double(a.phi_min_right));
  kv.emplace_back("phi_barrier", format_double(a.phi_barrier));
  kv.emplace_back("omega_left_rad_s", format_double(a.omega_left));
  kv.emplace_back("omega_right_rad_s", format_double(a.omega_right));
  kv.emplace_back("energy_left_joule", format_double(a.energy_left));
  kv.emplace_back("energy_right_joule", format_double(a.energy_right));
  kv.emplace_back("epsilon_rad_s", format_double(a.epsilon));
  kv.emplace_back("delta_estimate_rad_s", format_double(a.delta_estimate));
  kv.emplace_back("barrier_height_joule", format_double(a.barrier_height));
  kv.emplace_back("circulating_current_ampere",
                  format_double(a.circulating_current));
  kv.emplace_back("two_level_valid", a.two_level_valid ? "1" : "0");
  std::string warn;
  for (const auto& w : a.warnings) {
    if (!warn.empty()) warn += "; ";
    warn += w;
  }
  kv.emplace_back("warnings", warn.empty() ? "none" : warn);
  write_report(st.art.path("squid_report.txt"), kv);

  st.note("beta_L", p.beta_L());
  st.note("circulating_current_ampere", a.circulating_current);
  st.note("epsilon_rad_s", a.epsilon);
  st.note("delta_estimate_rad_s", a.delta_estimate);
  return a;
}

void run_field_sample(Stage& st, double current) {
  const LoopGeometry g = loop_geometry(st.cfg);
  const auto& fc = st.cfg.field;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> rows;
  const auto coord = [&](int i, int k) {
    const int n = fc.grid_n(k);
    if (n == 1) return fc.grid_min(k);
    return fc.grid_min(k) +
           (fc.grid_max(k) - fc.grid_min(k)) * i / double(n - 1);
  };
  for (int ix = 0; ix < fc.grid_n(0); ++ix) {
    for (int iy = 0; iy < fc.grid_n(1); ++iy) {
      for (int iz = 0; iz < fc.grid_n(2); ++iz) {
        const Eigen::Vector3d r(coord(ix, 0), coord(iy, 1), coord(iz, 2));
        std::vector<double> row{r(0), r(1), r(2), nan, nan, nan,
                                nan,  nan,  nan};
        if (!inside_wire(r, g)) {
          const Eigen::Vector3d a = vector_potential(r, g, current);
          const Eigen::Vector3d b = magnetic_field(r, g, current);
          for (int i = 0; i < 3; ++i) row[3 + i] = a(i);
          for (int i = 0; i < 3; ++i) row[6 + i] = b(i);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  write_csv(st.art.path("field_samples.csv"), "x,y,z,Ax,Ay,Az,Bx,By,Bz",
            rows);
  st.note("field_current_ampere", current);
}

struct CouplingOutcome {
  std::complex<double> omega;
  InteractionDecomposition decomp;
};

CouplingOutcome run_coupling(Stage& st, double current) {
  const LoopGeometry g = loop_geometry(st.cfg);
  const BecParams bec = bec_params(st.cfg, g);
  QuadratureInfo info{};
  const GMatrix gm = coupling_vectors(bec, g, current, 32, 1e-6, &info);
  const std::complex<double> omega = rabi_frequency(gm, bec);
  const InteractionDecomposition dec = interaction_decomposition(gm, bec);

  KV kv;
  kv.emplace_back("oscillator_length_m", format_double(bec.oscillator_length()));
  kv.emplace_back("current_ampere", format_double(current));
  kv.emplace_back("g_field_x_tesla", format_double(gm[1][0](0)));
  kv.emplace_back("g_field_y_tesla", format_double(gm[1][0](1)));
  kv.emplace_back("g_field_z_tesla", format_double(gm[1][0](2)));
  kv.emplace_back("omega_re_rad_s", format_double(omega.real()));
  kv.emplace_back("omega_im_rad_s", format_double(omega.imag()));
  kv.emplace_back("omega_abs_rad_s", format_double(std::abs(omega)));
  kv.emplace_back("diagonal_shift_rad_s", format_double(dec.diagonal_shift));
  kv.emplace_back("zz_coupling_rad_s", format_double(dec.zz_coupling));
  kv.emplace_back("quadrature_nodes_per_axis",
                  std::to_string(info.nodes_per_axis));
  kv.emplace_back("quadrature_skipped_nodes",
                  std::to_string(info.skipped_nodes));
  kv.emplace_back("quadrature_relative_change",
                  format_double(info.relative_change));
  write_report(st.art.path("coupling_report.txt"), kv);

  // Axial profile of the weighted integrand through the trap center.
  const double a_ho = bec.oscillator_length();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 201; ++i) {
    const double s = -5.0 * a_ho + 10.0 * a_ho * i / 200.0;
    const Eigen::Vector3d r = bec.trap_center + s * g.axis;
    const double phi = ho_ground_state(r, bec);
    double b_axis = nan, integrand = nan;
    if (!inside_wire(r, g)) {
      b_axis = magnetic_field(r, g, current).dot(g.axis);
      integrand = phi * phi * b_axis;
    }
    rows.push_back({s, phi * phi, b_axis, integrand});
  }
  write_csv(st.art.path("coupling_integrand.csv"),
            "s,density,b_axis,integrand", rows);

  st.note("omega_abs_rad_s", std::abs(omega));
  st.note("diagonal_shift_rad_s", dec.diagonal_shift);
  st.note("zz_coupling_rad_s", dec.zz_coupling);
  return {omega, dec};
}

IntegratorOptions integrator_options(const RunConfig& c) {
  IntegratorOptions opt;
  opt.frame = (c.dynamics.frame == "lab") ? Frame::Lab : Frame::Rotating;
  opt.step_fraction = c.dynamics.step_fraction;
  return opt;
}

// The "fast" profile keeps the qubit-frequency hierarchy of the physical
// ("desk") profile but scales E_hfs down to 2 pi x 100 MHz so protocols
// integrate in milliseconds.  Omega defaults to 2 pi x 25 kHz: the ramps only
// produce a clean Rabi exchange while they are sudden on the coupling's time
// scale (|Omega| tau << 1; slower ramps dress the states and cap the transfer
// fidelity), so the default keeps microsecond ramps deep in that regime,
// matching the physical-profile product |Omega| x ramp.
HybridParams hybrid_params(const RunConfig& c,
                           const std::optional<CouplingOutcome>& coupling) {
  HybridParams p;
  if (c.dynamics.profile == "fast") {
    p.e_hfs = kTwoPi * 1e8;
    p.omega = c.dynamics.rabi_override.value_or(kTwoPi * 2.5e4);
  } else {
    p.e_hfs = c.bec.e_hfs;
    if (c.dynamics.rabi_override) {
      p.omega = *c.dynamics.rabi_override;
    } else if (coupling) {
      p.omega = coupling->omega;
    } else {
      throw ConfigError(
          "desk profile needs rabi_override or a coupling stage");
    }
  }
  if (coupling) {
    p.zz_coupling = coupling->decomp.zz_coupling;
    p.diagonal_shift = coupling->decomp.diagonal_shift;
  }
  if (std::abs(p.omega) == 0.0) {
    throw ConfigError("Rabi coupling is zero; no protocol possible");
  }
  return p;
}

std::vector<std::vector<double>> dynamics_rows(const ProtocolResult& r) {
  std::vector<std::vector<double>> rows;
  rows.reserve(r.samples.size());
  for (const auto& s : r.samples) {
    rows.push_back({s.t, s.w, s.f_raw, s.f_opt, s.populations[3],
                    s.populations[2], s.populations[1], s.populations[0]});
  }
  return rows;
}

KV protocol_report(const ProtocolResult& r, const HybridParams& p,
                   const RunConfig& c) {
  KV kv;
  kv.emplace_back("e_hfs_rad_s", format_double(p.e_hfs));
  kv.emplace_back("omega_abs_rad_s", format_double(std::abs(p.omega)));
  kv.emplace_back("frame", c.dynamics.frame);
  kv.emplace_back("requested_ramp_seconds",
                  format_double(c.dynamics.ramp_time));
  kv.emplace_back("measured_ramp_seconds",
                  format_double(r.measured_ramp_seconds));
  kv.emplace_back("measured_hold_seconds",
                  format_double(r.measured_hold_seconds));
  kv.emplace_back("t_end_seconds", format_double(r.t_end));
  kv.emplace_back("f_raw_final", format_double(r.f_raw_final));
  kv.emplace_back("f_phase_opt_final", format_double(r.f_opt_final));
  kv.emplace_back("optimal_phase_rad", format_double(r.optimal_phase));
  kv.emplace_back("bec_fidelity_final", format_double(r.bec_fidelity_final));
  kv.emplace_back("concurrence_final", format_double(r.concurrence_final));
  kv.emplace_back("norm_drift_max", format_double(r.norm_drift));
  return kv;
}

ProtocolResult run_dynamics(Stage& st,
                            const std::optional<CouplingOutcome>& coupling) {
  const RunConfig& c = st.cfg;
  const HybridParams p = hybrid_params(c, coupling);
  const IntegratorOptions opt = integrator_options(c);
  const bool entangle = c.dynamics.protocol == "entangle";

  const std::complex<double> alpha = c.dynamics.alpha;
  const std::complex<double> beta = c.dynamics.beta;
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
    throw ConfigError("alpha/beta amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }

  const ProtocolResult r =
      entangle
          ? entangle_protocol(p, c.dynamics.ramp_time, opt, c.dynamics.w_off)
          : transfer_protocol(alpha, beta, p, c.dynamics.ramp_time, opt,
                              c.dynamics.w_off);
  const std::string base = entangle ? "entangle" : "transfer";
  write_csv(st.art.path(base + "_dynamics.csv"),
            "t_seconds,W,F_raw,F_phase_opt,P00,P01,P10,P11",
            dynamics_rows(r));
  write_report(st.art.path(base + "_report.txt"), protocol_report(r, p, c));
  st.note("protocol", base);
  st.note("f_phase_opt_final", r.f_opt_final);
  st.note("concurrence_final", r.concurrence_final);
  return r;
}

void run_sweep(Stage& st, const std::optional<CouplingOutcome>& coupling) {
  const RunConfig& c = st.cfg;
  const HybridParams p = hybrid_params(c, coupling);
  IntegratorOptions opt = integrator_options(c);
  opt.output_samples = 101;  // the sweep only needs final fidelities
  const auto rows =
      sweep_ramp_times(p, c.dynamics.sweep_ramps, opt, c.dynamics.w_off);
  std::vector<std::vector<double>> csv;
  double fmin = 1.0, fmax = 0.0;
  for (const auto& row : rows) {
    csv.push_back({row.ramp_seconds, row.f_final});
    fmin = std::min(fmin, row.f_final);
    fmax = std::max(fmax, row.f_final);
  }
  write_csv(st.art.path("ramp_sweep.csv"), "ramp_seconds,F_final", csv);
  KV kv;
  kv.emplace_back("points", std::to_string(rows.size()));
  kv.emplace_back("f_min", format_double(fmin));
  kv.emplace_back("f_max", format_double(fmax));
  write_report(st.art.path("sweep_report.txt"), kv);
  st.note("sweep_f_min", fmin);
  st.note("sweep_f_max", fmax);
}

void run_tomography(Stage& st, const ProtocolResult& protocol) {
  const RunConfig& c = st.cfg;
  const ExperimentResult ex = transfer_fidelity_experiment(
      HybridState(protocol.final_state), c.dynamics.alpha, c.dynamics.beta,
      c.tomography.shots, c.tomography.seed, false);

  std::vector<std::vector<double>> rows;
  for (const auto& rec : ex.records) {
    rows.push_back({static_cast<double>(static_cast<int>(rec.axis)),
                    static_cast<double>(rec.shots),
                    static_cast<double>(rec.plus_count),
                    static_cast<double>(rec.seed)});
  }
  write_csv(st.art.path("tomography_records.csv"), "axis,M,plus_count,seed",
            rows);

  KV kv;
  const auto& a = ex.recon.a_hat;
  const auto& se = ex.recon.a_stderr;
  kv.emplace_back("a_x", format_double(a(0)));
  kv.emplace_back("a_y", format_double(a(1)));
  kv.emplace_back("a_z", format_double(a(2)));
  kv.emplace_back("a_x_stderr", format_double(se(0)));
  kv.emplace_back("a_y_stderr", format_double(se(1)));
  kv.emplace_back("a_z_stderr", format_double(se(2)));
  kv.emplace_back("bloch_norm", format_double(a.norm()));
  kv.emplace_back("physical", ex.recon.rho_raw.is_physical() ? "1" : "0");
  kv.emplace_back("projected", ex.recon.rho_projected ? "1" : "0");
  kv.emplace_back("fidelity_estimate", format_double(ex.fidelity));
  kv.emplace_back("fidelity_stderr", format_double(ex.fidelity_stderr));
  kv.emplace_back("fidelity_exact", format_double(ex.fidelity_exact));
  kv.emplace_back("shots_per_axis", std::to_string(c.tomography.shots));
  kv.emplace_back("seed", std::to_string(c.tomography.seed));
  write_report(st.art.path("tomography_report.txt"), kv);
  st.note("tomography_fidelity", ex.fidelity);
  st.note("tomography_fidelity_exact", ex.fidelity_exact);
}

void write_manifest(Stage& st, const CliInvocation& inv) {
  std::ofstream out(st.art.path("run_manifest.txt"));
  if (!out) throw IoError("cannot write run manifest");
  out << "[run]\n";
  out << "tool = squidbec " << "0.1.0" << "\n";
  out << "subcommand = " << inv.subcommand << "\n";
  out << "timestamp = " << iso_timestamp() << "\n";
  out << "\n" << config_to_text(st.cfg);
  out << "\n[derived]\n";
  for (const auto& [k, v] : st.derived) out << k << " = " << v << "\n";
  out.flush();
  if (!out) throw IoError("cannot write run manifest");
}

RunConfig load_config(const CliInvocation& inv) {
  RunConfig cfg;
  if (inv.config_path) cfg = parse_config(*inv.config_path);
  if (inv.seed) cfg.tomography.seed = *inv.seed;
  if (inv.fast) cfg.dynamics.profile = "fast";
  return cfg;
}

}  // namespace

int run_subcommand(const CliInvocation& inv, std::string& err) {
  try {
    const RunConfig cfg = load_config(inv);
    const std::string out_dir = resolve_out_dir(inv, cfg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");
    ArtifactSet art(out_dir);
    Stage st{cfg, art, {}};

    const std::string& cmd = inv.subcommand;
    if (cmd == "squid-analyze") {
      run_squid_analyze(st);
    } else if (cmd == "field-sample") {
      run_field_sample(st, loop_current(cfg));
    } else if (cmd == "coupling") {
      run_coupling(st, loop_current(cfg));
    } else if (cmd == "transfer" || cmd == "entangle") {
      RunConfig tweaked = cfg;
      tweaked.dynamics.protocol = (cmd == "entangle") ? "entangle" : "transfer";
      std::optional<CouplingOutcome> coupling;
      if (tweaked.dynamics.profile == "desk" &&
          !tweaked.dynamics.rabi_override) {
        coupling = run_coupling(st, loop_current(cfg));
      }
      Stage st2{tweaked, art, std::move(st.derived)};
      run_dynamics(st2, coupling);
      st.derived = std::move(st2.derived);
    } else if (cmd == "sweep-ramp") {
      std::optional<CouplingOutcome> coupling;
      if (cfg.dynamics.profile == "desk" && !cfg.dynamics.rabi_override) {
        coupling = run_coupling(st, loop_current(cfg));
      }
      run_sweep(st, coupling);
    } else if (cmd == "tomography") {
      std::optional<CouplingOutcome> coupling;
      if (cfg.dynamics.profile == "desk" && !cfg.dynamics.rabi_override) {
        coupling = run_coupling(st, loop_current(cfg));
      }
      const ProtocolResult r = run_dynamics(st, coupling);
      run_tomography(st, r);
    } else if (cmd == "full-pipeline") {
      run_squid_analyze(st);
      const double current = loop_current(cfg);
      run_field_sample(st, current);
      const CouplingOutcome coupling = run_coupling(st, current);
      const ProtocolResult r = run_dynamics(st, coupling);
      run_tomography(st, r);
    } else {
      throw ConfigError("unknown subcommand '" + cmd + "'");
    }

    write_manifest(st, inv);
    art.commit();
    return kExitOk;
  } catch (const ConfigError& e) {
    err = std::string("config error: ") + e.what();
    return kExitConfig;
  } catch (const DomainError& e) {
    err = std::string("config error: ") + e.what();
    return kExitConfig;
  } catch (const NumericalError& e) {
    err = std::string("numerical error: ") + e.what();
    return kExitNumerical;
  } catch (const IoError& e) {
    err = std::string("io error: ") + e.what();
    return kExitIo;
  } catch (const std::exception& e) {
    err = std::string("error: ") + e.what();
    return kExitNumerical;
  }
}

}  // namespace squidbec
