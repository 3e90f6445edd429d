#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

// Double-well analysis of an rf-SQUID flux qubit: an inductive loop (L)
// with a Josephson junction (critical current Ic, capacitance C), biased by
// an external flux phi_ex (in flux-quantum units).
//
// Potential, in units of U0 = Phi0^2 / (4 pi^2 L):
//   U(phi)/U0 = (2 pi)^2 (phi - phi_ex)^2 / 2 - beta_L cos(2 pi phi),
// with beta_L = 2 pi L Ic / Phi0.

namespace squidbec {

struct SquidParams {
  double inductance;   // L, henry
  double capacitance;  // C, farad
  double critical_current;  // Ic, ampere
  double phi_ex;       // external flux, units of Phi0

  SquidParams(double L, double C, double Ic, double phi_ex_);

  // Derived, never stored: screening parameter and energy scale.
  double beta_L() const;
  double u0() const;  // joule
};

// Dimensionless double-well potential U(phi)/U0.
double reduced_potential(double phi, double phi_ex, double beta_L);

struct Extremum {
  double phi;  // units of Phi0
  enum class Kind { Minimum, Maximum, Degenerate } kind;
};

// All stationary points of U in [phi_ex - 1, phi_ex + 1], sorted by phi.
// Dense grid scan (grid_points intervals) + bisection refined to |dphi| tol.
std::vector<Extremum> find_extrema(const SquidParams& p, int grid_points = 10000,
                                   double tol = 1e-13);

// Small-oscillation (plasma) angular frequency at a potential minimum,
// omega = sqrt((1 + beta_L cos(2 pi phi_min)) / (L C)), rad/s.
double well_frequency(const SquidParams& p, double phi_min);

// Ground-state Gaussian of one well, normalized over flux:
//   psi(Phi) = (alpha/pi)^(1/4) exp(-alpha (Phi - center)^2 / 2),
// alpha = C * omega / hbar (1/Wb^2).
struct GaussianState {
  double center_flux;  // Wb
  double alpha;        // 1/Wb^2
  double operator()(double flux) const;
};

struct DoubleWellAnalysis {
  double phi_min_left, phi_min_right;  // the two minima, units of Phi0
  double phi_barrier;                  // maximum between them
  double omega_left, omega_right;      // rad/s
  double energy_left, energy_right;    // U at the minima, joule
  double epsilon;         // (energy_left - energy_right)/hbar, rad/s
  double delta_estimate;  // tunneling splitting estimate, rad/s (>= 0)
  double barrier_height;  // U(barrier) - max(U_left, U_right), joule
  double circulating_current;  // (Phi_min_left - Phi_ex)/L, ampere
  bool two_level_valid;   // false when delta_estimate exceeds min well spacing
  std::vector<std::string> warnings;
};

// Requires the circuit to be in the double-well regime (exactly two minima
// with one maximum between); throws DomainError otherwise.
DoubleWellAnalysis analyze_double_well(const SquidParams& p);

// Left/right well ground-state Gaussians.
std::pair<GaussianState, GaussianState> gaussian_well_states(
    const SquidParams& p, const DoubleWellAnalysis& a);

// Overlap <L|R> over flux, by Gauss-Hermite quadrature on the Gaussian
// product measure.
double well_state_overlap(const GaussianState& left, const GaussianState& right);

// Tunneling splitting magnitude Delta_est = -2 <L|H|R> (rad/s), with
// H = p^2/2C + U(Phi), evaluated by quadrature over flux.  Reported as an
// order-of-magnitude estimate only; the hybrid protocols treat the qubit
// splitting as a free control.
struct TunnelingEstimate {
  double delta;  // rad/s
  bool two_level_valid;
};
TunnelingEstimate tunneling_estimate(const SquidParams& p,
                                     const DoubleWellAnalysis& a);

// Expectation of the circulating-current operator in the left well,
// I = (Phi_min_left - Phi_ex)/L.  Enforces the symmetric-well assumption
// |(Phi_L - Phi_ex) + (Phi_R - Phi_ex)| <= symmetry_tol * |Phi_L - Phi_ex|
// and throws DomainError beyond tolerance.
double circulating_current(const SquidParams& p, const DoubleWellAnalysis& a,
                           double symmetry_tol = 0.05);

// Two-level qubit in the energy basis.
struct FluxQubit {
  double epsilon;  // rad/s
  double delta;    // rad/s
};

// H = (epsilon/2) sigma_z - (delta/2) sigma_x, rad/s, basis (|1>, |0>).
Eigen::Matrix2cd flux_qubit_hamiltonian(const FluxQubit& q);

}  // namespace squidbec
