#pragma once

#include <Eigen/Dense>

#include "squidbec/constants.hpp"

// Magnetostatics of a circular current loop (radius d, thin wire of
// cross-section radius a), evaluated in closed form via complete elliptic
// integrals.  The loop may sit anywhere in the lab frame (center + axis);
// field values are returned as lab-frame Cartesian vectors.

namespace squidbec {

struct LoopGeometry {
  double loop_radius;   // d, meters
  double wire_radius;   // a, meters; must satisfy a < d/10 (thin-wire model)
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // normalized on validate()

  LoopGeometry(double d, double a,
               const Eigen::Vector3d& c = Eigen::Vector3d::Zero(),
               const Eigen::Vector3d& n = Eigen::Vector3d::UnitZ());

  // Right-handed orthonormal triad (e1, e2, axis) fixing the loop frame.
  Eigen::Vector3d e1, e2;
};

// Evaluation point in the loop frame, spherical (r from loop center, theta
// from the loop axis).  Either given directly or derived from a lab-frame
// Cartesian point through the geometry.
struct FieldPoint {
  double r;      // meters, >= 0
  double theta;  // radians, in [0, pi]

  FieldPoint(double r_, double theta_);
  static FieldPoint from_lab(const Eigen::Vector3d& lab_point,
                             const LoopGeometry& g);
};

// True when the point lies inside the wire volume (distance to the wire
// circle below the wire cross-section radius); field formulas are singular
// there and evaluation refuses.
bool inside_wire(const FieldPoint& p, const LoopGeometry& g);
bool inside_wire(const Eigen::Vector3d& lab_point, const LoopGeometry& g);

// Complete elliptic integrals of modulus k, via the arithmetic-geometric
// mean (relative error < 1e-13).  K: k in [0, 1).  E: k in [0, 1].
double elliptic_K(double k);
double elliptic_E(double k);

// Azimuthal vector potential A_phi(r, theta) of the loop carrying current I
// (amps), in tesla*meter.  Exactly zero on the axis.
double vector_potential_phi(const FieldPoint& p, const LoopGeometry& g,
                            double current);

// Field components in the loop frame: radial (cylindrical rho) and axial.
struct CylindricalField {
  double b_rho;
  double b_z;
};
CylindricalField magnetic_field_cyl(const FieldPoint& p, const LoopGeometry& g,
                                    double current);

// Lab-frame Cartesian vectors at a lab-frame point.
Eigen::Vector3d vector_potential(const Eigen::Vector3d& lab_point,
                                 const LoopGeometry& g, double current);
Eigen::Vector3d magnetic_field(const Eigen::Vector3d& lab_point,
                               const LoopGeometry& g, double current);

// Numerical-curl fallback: B = curl A from sixth-order central differences
// of the vector potential, step h = 1e-6 * max(r, d).  Used to cross-check
// the analytic derivatives; the analytic path is the production one.
Eigen::Vector3d magnetic_field_fd(const Eigen::Vector3d& lab_point,
                                  const LoopGeometry& g, double current);

// Operator amplitude profiles at a point: the loop field B(r) multiplies the
// circuit's sigma_z; the transition-dipole part A(r)*delta multiplies
// sigma_y (delta is the circuit tunneling splitting, rad/s; the electric
// amplitude is in V/m).
struct FieldOperatorAmplitudes {
  Eigen::Vector3d b_sigma_z;  // tesla
  Eigen::Vector3d e_sigma_y;  // V/m
};
FieldOperatorAmplitudes field_operator_amplitudes(
    const Eigen::Vector3d& lab_point, const LoopGeometry& g, double current,
    double delta);

}  // namespace squidbec
