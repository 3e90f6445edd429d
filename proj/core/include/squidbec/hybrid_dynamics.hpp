#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Joint dynamics of the hyperfine qubit (B) and the flux qubit (S) in the
// computational product basis, ordered (|11>, |10>, |01>, |00>) with
// |ij> = |i>_B (x) |j>_S:
//
//   H(t) = (E_hfs/2) sz (+) (Delta(t)/2) sz - [[0, Om], [Om*, 0]] (x) sx,
//
// A (+) B = A (x) 1 + 1 (x) B, Om the collective Rabi coupling.  The flux
// qubit splitting Delta(t) = E_hfs * ramp(t) is the control knob that
// brings the pair into and out of resonance; its bias is held at the
// symmetry point (epsilon = 0) throughout.

namespace squidbec {

struct RampSchedule {
  double t_on;   // seconds
  double t_off;  // seconds, > t_on
  double tau;    // ramp sharpness, seconds, > 0
  double w_off = 0.5;  // off-resonance plateau of W(t), in (0, 1)

  RampSchedule(double on, double off, double tau_, double w_off_ = 0.5);
};

// W(t) = w_off + (1 - w_off) [tanh((t-t_on)/tau) - tanh((t-t_off)/tau)] / 2;
// rises from w_off to ~1 and back, always inside [w_off, 1].
double ramp_window(double t, const RampSchedule& s);

// Time for W to rise from crossing 1.01*w_off to within 1% of 1 (root-found
// on the rising edge); throws NumericalError when the schedule never gets
// within 1% of resonance.
double measured_ramp_time(const RampSchedule& s);

// Length of the resonant window: time between the rising and falling
// crossings of W = 0.99.
double resonant_window(const RampSchedule& s);

struct HybridParams {
  double e_hfs;                 // rad/s
  std::complex<double> omega;   // collective Rabi coupling, rad/s
  // Optional validation terms from the interaction decomposition; both are
  // expressed in the circuit current basis and enter here transformed to the
  // energy basis (sz_S -> sx_S).
  double zz_coupling = 0.0;     // rad/s
  double diagonal_shift = 0.0;  // rad/s
  bool include_zz = false;
  bool include_shift = false;
};

// Normalized 4-amplitude state; throws DomainError if the norm is off by
// more than 1e-9.
struct HybridState {
  Eigen::Vector4cd amplitudes;  // (c11, c10, c01, c00)
  explicit HybridState(const Eigen::Vector4cd& amps);
};

// Instantaneous lab-frame Hamiltonian (rad/s).
Eigen::Matrix4cd hamiltonian_at(double t, const RampSchedule& s,
                                const HybridParams& p);

enum class Frame { Lab, Rotating };

struct IntegratorOptions {
  Frame frame = Frame::Rotating;
  // Step = step_fraction * (shortest retained period); the rotating frame
  // still carries the counter-rotating phase at 2*E_hfs, so the step rule
  // resolves 2*E_hfs there and E_hfs in the lab frame.
  double step_fraction = 1e-2;
  double norm_tolerance = 1e-9;
  int output_samples = 1001;
};

struct Sample {
  double t;
  double w;          // ramp value
  double f_raw;      // |<target|psi>|
  double f_opt;      // phase-optimized fidelity
  double populations[4];  // |c11|^2, |c10|^2, |c01|^2, |c00|^2
  double energy;     // <H>(t), rad/s
};

struct ProtocolResult {
  std::vector<Sample> samples;
  Eigen::Vector4cd final_state;       // lab frame
  double f_raw_final;
  double f_opt_final;
  double optimal_phase;               // arg max chi of the phase family
  double concurrence_final;
  double bec_fidelity_final;          // phase-opt fidelity of the reduced B qubit
  double measured_ramp_seconds;
  double measured_hold_seconds;
  double norm_drift;                  // max |norm - 1| seen
  RampSchedule schedule;
  double t_start, t_end;
};

// Fidelity against the family target(chi) = P0 target + e^{i chi} P1 target
// (P_b projects the B qubit onto b); local sigma_z phases on the B qubit are
// considered correctable.  Returns {f_opt, chi*}; f_raw is |<target|psi>|.
std::pair<double, double> phase_optimized_fidelity(
    const Eigen::Vector4cd& target, const Eigen::Vector4cd& psi);

// Pure-state two-qubit concurrence 2 |c11 c00 - c10 c01|.
double concurrence(const Eigen::Vector4cd& psi);

// Piecewise matrix-exponential propagation from t_start to t_end; records
// output_samples points.  Unconditionally unitary per step; aborts with
// NumericalError if the norm drifts by more than norm_tolerance or the step
// underflows.
ProtocolResult evolve(const HybridState& initial, const RampSchedule& s,
                      const HybridParams& p, const Eigen::Vector4cd& target,
                      double t_start, double t_end,
                      const IntegratorOptions& opt = {});

// State-transfer protocol: initial |0>_B (x) (alpha|0> + beta|1>)_S, hold
// calibrated so the integrated resonant phase |Om| * resonant_window equals
// pi/2, target alpha|00> + beta|10>.
ProtocolResult transfer_protocol(const std::complex<double>& alpha,
                                 const std::complex<double>& beta,
                                 const HybridParams& p, double ramp_seconds,
                                 const IntegratorOptions& opt = {},
                                 double w_off = 0.5);

// Entangling protocol: initial |01>, resonant phase pi/4, target
// (|01> + e^{i chi}|10>)/sqrt(2) with chi the recorded protocol phase.
ProtocolResult entangle_protocol(const HybridParams& p, double ramp_seconds,
                                 const IntegratorOptions& opt = {},
                                 double w_off = 0.5);

// Final transfer fidelity (phase-optimized, initial |01>) for each requested
// ramp time; protocol instances run in parallel.  Duplicate ramp values give
// identical rows.
struct SweepRow {
  double ramp_seconds;
  double f_final;
};
std::vector<SweepRow> sweep_ramp_times(const HybridParams& p,
                                       const std::vector<double>& ramps,
                                       const IntegratorOptions& opt = {},
                                       double w_off = 0.5);

// Schedule construction shared by the protocols: tau chosen so the measured
// ramp time of a saturated plateau equals ramp_seconds (for w_off = 1/2 the
// conversion is ramp = [atanh(0.96) + atanh(0.98)] tau ~ 4.2435 tau), pads of
// 10 tau on both sides, t_off calibrated by root finding so
// resonant_window = hold_phase/|Om|.
struct ProtocolWindow {
  RampSchedule schedule;
  double t_start, t_end;
};
ProtocolWindow calibrated_window(double ramp_seconds, double hold_phase,
                                 double omega_mag, double w_off = 0.5);

}  // namespace squidbec
