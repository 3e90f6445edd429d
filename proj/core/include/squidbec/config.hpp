#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Run configuration: structured text, one `key = value` per line inside
// [section] blocks, `#` comments.  Every dimensioned value carries an
// explicit unit suffix checked against the key's expected dimension
// (a small unit table; no silent SI-prefix surprises).  Frequencies are
// ordinary frequencies in the file and angular (rad/s) in memory.
//
// Unknown keys, duplicate keys, missing units, unit mismatches and
// out-of-range values raise ConfigError with file:line context.
// Sections [run] and [derived] are ignored on input so an emitted run
// manifest can be fed back verbatim as --config.

namespace squidbec {

struct SquidConfig {
  double inductance = 100e-12;        // H
  double capacitance = 10e-15;        // F
  double critical_current = 6.91e-6;  // A
  double phi_ex = 0.51;               // units of Phi0
};

struct LoopConfig {
  double radius = 1e-6;       // m
  double wire_radius = 5e-8;  // m
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  std::optional<double> current;  // A; default: squid circulating current
};

struct BecConfig {
  double atom_number = 1e6;
  double trap_frequency = 2.0 * 3.141592653589793 * 50.0;  // rad/s
  double atom_mass = 87.0 * 1.66053906660e-27;             // kg
  Eigen::Vector3d trap_center = Eigen::Vector3d(0, 0, 50e-6);
  double e_hfs = 2.0 * 3.141592653589793 * 6.835e9;        // rad/s
  // Moment matrix elements in units of mu_B; z means the loop axis.
  Eigen::Vector3d mu_uu = Eigen::Vector3d(0, 0, 1.0);
  Eigen::Vector3d mu_dd = Eigen::Vector3d(0, 0, -0.5);
  Eigen::Vector3cd mu_du = Eigen::Vector3cd(0, 0, 1.0);
};

struct DynamicsConfig {
  std::string profile = "fast";   // "fast" | "desk"
  std::optional<double> rabi_override;  // rad/s
  double ramp_time = 1e-6;        // s
  double w_off = 0.5;
  std::string frame = "rotating";  // "rotating" | "lab"
  double step_fraction = 1e-2;
  std::string protocol = "transfer";  // "transfer" | "entangle"
  std::complex<double> alpha{0.0, 0.0};  // transfer initial squid amplitudes
  std::complex<double> beta{1.0, 0.0};
  std::vector<double> sweep_ramps = {1e-7, 2e-7, 5e-7, 1e-6};  // s
};

struct TomographyConfig {
  std::uint64_t shots = 10000;
  std::uint64_t seed = 12345;
};

struct FieldGridConfig {
  Eigen::Vector3d grid_min = Eigen::Vector3d(-2e-6, -2e-6, -2e-6);
  Eigen::Vector3d grid_max = Eigen::Vector3d(2e-6, 2e-6, 2e-6);
  Eigen::Vector3i grid_n = Eigen::Vector3i(9, 9, 9);
};

struct OutputConfig {
  std::string dir = "out";
};

struct RunConfig {
  SquidConfig squid;
  LoopConfig loop;
  BecConfig bec;
  DynamicsConfig dynamics;
  TomographyConfig tomography;
  FieldGridConfig field;
  OutputConfig output;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

// Serialize back to the config format (base SI units, %.17g round-trip).
std::string config_to_text(const RunConfig& c);

}  // namespace squidbec
