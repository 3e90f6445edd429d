#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>

#include "squidbec/loop_field.hpp"

// Magnetic coupling between the loop field and a harmonically trapped
// two-component condensate (hyperfine qubit).  Both spin components share
// one spatial mode phi(r) (isotropic harmonic-oscillator ground state), so
// the field-overlap vectors
//   g_{s s'} = \int |phi(r)|^2 B(r) d^3r        (tesla)
// coincide for all four spin pairs; the 2x2 structure is kept for future
// asymmetric modes.

namespace squidbec {

struct MomentMatrix {
  // Magnetic-moment matrix elements (J/T vectors) in the spin basis
  // (|up>, |down>); mu_ud is implied as conj(mu_du).  Hermiticity of the
  // diagonal entries is enforced on construction.
  Eigen::Vector3cd mu_uu;
  Eigen::Vector3cd mu_dd;
  Eigen::Vector3cd mu_du;  // <down| mu |up>

  MomentMatrix(const Eigen::Vector3cd& uu, const Eigen::Vector3cd& dd,
               const Eigen::Vector3cd& du);

  Eigen::Vector3cd mu_ud() const { return mu_du.conjugate(); }

  // Rb-87-like defaults: diagonal moments -mu_B/2 and +mu_B along the loop
  // axis, transition moment of magnitude mu_B oriented along the axis (the
  // direction of the loop field at an on-axis trap), fully overridable.
  static MomentMatrix rb87_default(const Eigen::Vector3d& axis);
};

struct BecParams {
  double atom_number;     // N (treated as a real scale factor)
  double trap_frequency;  // omega_ho, rad/s
  double atom_mass;       // kg
  Eigen::Vector3d trap_center;  // lab frame, meters
  double e_hfs;           // hyperfine splitting, rad/s
  MomentMatrix moments;

  BecParams(double N, double omega_ho, double mass,
            const Eigen::Vector3d& center, double e_hfs_,
            const MomentMatrix& m);

  double oscillator_length() const;  // a_ho = sqrt(hbar/(m omega_ho)), m
};

// Shared spatial mode: normalized 3-D Gaussian, peak (pi a_ho^2)^(-3/4).
double ho_ground_state(const Eigen::Vector3d& r, const BecParams& p);

using GMatrix = std::array<std::array<Eigen::Vector3d, 2>, 2>;  // [s][s'] tesla

struct QuadratureInfo {
  int nodes_per_axis;    // of the returned evaluation
  long skipped_nodes;    // nodes inside the wire volume (weight ~ 0), dropped
  double relative_change;  // between n^3 and (2n)^3 node evaluations
};

// Field-overlap vectors by tensor-product Gauss-Hermite quadrature.
// Evaluates at nodes_per_axis^3 and (2*nodes_per_axis)^3 nodes, requires
// relative agreement < convergence_tol (else NumericalError), returns the
// finer evaluation.  Nodes falling inside the wire volume are skipped; the
// trap must sit outside the wire, where such nodes carry negligible
// Gaussian weight.
GMatrix coupling_vectors(const BecParams& p, const LoopGeometry& g,
                         double current, int nodes_per_axis = 32,
                         double convergence_tol = 1e-6,
                         QuadratureInfo* info = nullptr);

// Test hook: same quadrature against an arbitrary field B(r).
using FieldFn = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;
GMatrix coupling_vectors(const BecParams& p, const FieldFn& field,
                         int nodes_per_axis = 32,
                         double convergence_tol = 1e-6,
                         QuadratureInfo* info = nullptr);

// Collectively enhanced Rabi coupling Omega = sqrt(N) g_du . mu_du / hbar
// (rad/s, complex).  The dot product is bilinear (no conjugation); swapping
// to the (u,d) element conjugates Omega.
std::complex<double> rabi_frequency(const GMatrix& g, const BecParams& p);

// Coefficients of the interaction decomposition (rad/s):
//   H_int = -shift (1 x sz) - zz (sz x sz) - [[0, Omega], [Omega*, 0]] x sz
// in the condensate x circuit current basis, with
//   shift = [(2N-1) g_dd.mu_dd + g_uu.mu_uu] / (2 hbar)
//   zz    = [g_uu.mu_uu - g_dd.mu_dd] / (2 hbar).
struct InteractionDecomposition {
  double diagonal_shift;  // rad/s
  double zz_coupling;     // rad/s
  Eigen::Matrix2cd qubit_block;  // [[0, Omega], [Omega*, 0]], rad/s
};
InteractionDecomposition interaction_decomposition(const GMatrix& g,
                                                   const BecParams& p);

// Bare hyperfine qubit Hamiltonian (E_hfs/2) sigma_z, basis (|1>, |0>).
Eigen::Matrix2cd bec_hamiltonian(const BecParams& p);

}  // namespace squidbec
