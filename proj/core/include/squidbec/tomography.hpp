#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>

#include "squidbec/hybrid_dynamics.hpp"

// Projective-readout tomography of the condensate qubit: per-axis frame
// rotations mapping <S_x>/<S_y>/<S_z> onto the measured <S_z>, binomial
// shot statistics, and Bloch-vector reconstruction with standard errors.

namespace squidbec {

enum class Axis { X = 0, Y = 1, Z = 2 };

// rho = (1 + a . sigma)/2 in basis (|1>, |0>); physical iff |a| <= 1
// (eigenvalues (1 +- |a|)/2).  Reconstruction can return slightly
// unphysical raw estimates, so |a| <= 1 is a query, not a constructor
// constraint; trace and Hermiticity are enforced.
struct QubitDensityMatrix {
  Eigen::Matrix2cd rho;

  explicit QubitDensityMatrix(const Eigen::Matrix2cd& m);  // validates
  static QubitDensityMatrix from_bloch(const Eigen::Vector3d& a);

  Eigen::Vector3d bloch() const;
  bool is_physical(double tol = 1e-12) const;  // |a| <= 1 + tol
};

// Partial trace over the flux qubit of a pure joint state.
QubitDensityMatrix reduce_to_bec(const HybridState& psi);

// Pre-measurement rotation for the requested axis:
//   X: rho' = exp(+i pi/2 Sy) rho exp(-i pi/2 Sy)
//   Y: rho' = exp(-i pi/2 Sx) rho exp(+i pi/2 Sx)
//   Z: identity,
// so that Tr(rho' Sz) = Tr(rho S_axis) exactly.
QubitDensityMatrix rotate_for_axis(const QubitDensityMatrix& rho, Axis axis);

struct MeasurementRecord {
  Axis axis;
  std::uint64_t shots;       // M
  std::uint64_t plus_count;  // outcomes projecting onto |1>
  std::uint64_t seed;
};

// M shots on the rotated state: plus_count ~ Binomial(M, (1 + a'_z)/2),
// sampled from RandomStream(seed, axis index).  Deterministic per seed.
MeasurementRecord simulate_shots(const QubitDensityMatrix& rho, Axis axis,
                                 std::uint64_t shots, std::uint64_t seed);

struct Reconstruction {
  Eigen::Vector3d a_hat;     // 2 p_hat - 1 per axis
  Eigen::Vector3d a_stderr;  // 2 sqrt(p_hat (1 - p_hat) / M)
  QubitDensityMatrix rho_raw;
  // Present when |a_hat| > 1: a_hat rescaled to unit norm (the nearest
  // physical state).
  std::optional<QubitDensityMatrix> rho_projected;
};

// One record per axis required (DomainError otherwise).
Reconstruction reconstruct(const std::array<MeasurementRecord, 3>& records);

// End-to-end: reduce the protocol's final state, measure each axis with
// shots_per_axis, reconstruct, and score against the target B-qubit state
// (alpha|0> + beta|1>, phase-optimized like the protocols).  The noiseless
// hook skips shot sampling and uses exact expectation values.
struct ExperimentResult {
  Reconstruction recon;
  std::array<MeasurementRecord, 3> records;
  double fidelity;        // max_chi sqrt(<t(chi)| rho_hat |t(chi)>)
  double fidelity_stderr; // linearized propagation of a_stderr
  double fidelity_exact;  // same functional on the exact reduced state
};
ExperimentResult transfer_fidelity_experiment(
    const HybridState& final_state, const std::complex<double>& alpha,
    const std::complex<double>& beta, std::uint64_t shots_per_axis,
    std::uint64_t seed, bool noiseless = false);

// Phase-optimized fidelity of a reconstructed (or exact) density matrix
// against the pure target alpha|0> + beta|1>:
//   F = sqrt( (1 + az bz + |a_perp| |b_perp|) / 2 ),
// b the target Bloch vector.  Shared by the experiment and the protocols'
// bec_fidelity_final.
double bec_target_fidelity(const Eigen::Vector3d& a_hat,
                           const std::complex<double>& alpha,
                           const std::complex<double>& beta);

}  // namespace squidbec
