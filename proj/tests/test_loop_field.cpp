#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <squidbec/constants.hpp>
#include <squidbec/errors.hpp>
#include <squidbec/loop_field.hpp>
#include <squidbec/rng.hpp>

#include "oracles.hpp"

using namespace squidbec;

namespace {

// Benchmark loop: 1 um radius, 50 nm wire, 1 mA.
constexpr double kD = 1e-6;
constexpr double kA = 5e-8;
constexpr double kI = 1e-3;

doctest::Approx rel(double want, double tol) {
  return doctest::Approx(want).epsilon(tol).scale(0.0);
}

}  // namespace

TEST_CASE("elliptic integrals match the power-series oracle") {
  for (double k = 0.1; k < 0.95; k += 0.1) {
    CHECK(elliptic_K(k) == rel(oracles::elliptic_K_series(k), 1e-12));
    CHECK(elliptic_E(k) == rel(oracles::elliptic_E_series(k), 1e-12));
  }
  // frozen reference values (series oracle, k = 0.5)
  CHECK(elliptic_K(0.5) == rel(1.685750354812596e+00, 1e-14));
  CHECK(elliptic_E(0.5) == rel(1.467462209339427e+00, 1e-14));
}

TEST_CASE("elliptic integral domain endpoints") {
  const double half_pi = 1.5707963267948966;
  CHECK(elliptic_K(0.0) == rel(half_pi, 1e-15));
  CHECK(elliptic_E(0.0) == rel(half_pi, 1e-15));
  CHECK(elliptic_E(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
  CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
  CHECK_THROWS_AS(elliptic_E(1.1), DomainError);
  CHECK_THROWS_AS(elliptic_E(-1e-9), DomainError);
}

TEST_CASE("vector potential matches the line-integral oracle at frozen points") {
  LoopGeometry g(kD, kA);
  struct Row {
    double r, theta, a_phi;
  };
  // frozen: 10^4-node trapezoidal Biot-Savart quadrature
  const Row rows[] = {
      {2.0 * kD, kPi / 3.0, 6.509662542283092e-11},
      {0.3 * kD, 2.0, 8.594504617962193e-11},
      {50.0 * kD, 1.0, 1.057350670753523e-13},
  };
  for (const Row& row : rows) {
    FieldPoint p(row.r, row.theta);
    CHECK(vector_potential_phi(p, g, kI) == rel(row.a_phi, 1e-10));
  }
}

TEST_CASE("magnetic field matches the line-integral oracle at frozen points") {
  LoopGeometry g(kD, kA);
  struct Row {
    double r, theta, b_rho, b_z;
  };
  const Row rows[] = {
      {2.0 * kD, kPi / 3.0, 5.928369279229924e-05, 1.678049109509472e-06},
      {0.3 * kD, 2.0, -3.542232074565536e-05, 6.469943844147537e-04},
      {50.0 * kD, 1.0, 3.428789982687756e-09, -3.111529507303881e-10},
  };
  for (const Row& row : rows) {
    CylindricalField f = magnetic_field_cyl(FieldPoint(row.r, row.theta), g, kI);
    CHECK(f.b_rho == rel(row.b_rho, 1e-10));
    CHECK(f.b_z == rel(row.b_z, 1e-10));
  }
}

TEST_CASE("randomized off-axis points agree with the quadrature oracle") {
  LoopGeometry g(kD, kA);
  RandomStream rng(987);
  int tested = 0;
  while (tested < 100) {
    const double r = kD * std::pow(10.0, -1.0 + 3.0 * rng.uniform());
    const double theta = 0.05 + (kPi - 0.1) * rng.uniform();
    FieldPoint p(r, theta);
    if (inside_wire(p, g)) continue;
    const double rho = r * std::sin(theta);
    const double z = r * std::cos(theta);

    const double a_want = oracles::loop_A_phi_quad(rho, z, kD, kI);
    CHECK(vector_potential_phi(p, g, kI) == rel(a_want, 1e-8));

    const Eigen::Vector3d b_want = oracles::loop_B_quad(rho, z, kD, kI);
    const CylindricalField f = magnetic_field_cyl(p, g, kI);
    const double db = std::hypot(f.b_rho - b_want.x(), f.b_z - b_want.z());
    CHECK(db <= 1e-8 * b_want.norm());
    ++tested;
  }
}

TEST_CASE("on-axis closed forms") {
  LoopGeometry g(kD, kA);
  const Eigen::Vector3d b0 = magnetic_field(Eigen::Vector3d::Zero(), g, kI);
  CHECK(b0.z() == rel(kMu0 * kI / (2.0 * kD), 1e-12));
  CHECK(b0.z() == rel(6.2832e-4, 1e-4));  // mu0 I / 2d at d = 1 um, I = 1 mA
  CHECK(b0.x() == 0.0);
  CHECK(b0.y() == 0.0);

  const double z = 0.7 * kD;
  const Eigen::Vector3d bz = magnetic_field(Eigen::Vector3d(0, 0, z), g, kI);
  const double want =
      kMu0 * kI * kD * kD / (2.0 * std::pow(kD * kD + z * z, 1.5));
  CHECK(bz.z() == rel(want, 1e-12));

  // A vanishes identically on the axis.
  CHECK(vector_potential(Eigen::Vector3d(0, 0, z), g, kI) ==
        Eigen::Vector3d::Zero());
  CHECK(vector_potential_phi(FieldPoint(z, 0.0), g, kI) == 0.0);
}

TEST_CASE("near-axis evaluation is continuous across the paraxial branch") {
  LoopGeometry g(kD, kA);
  const double z = 0.5 * kD;
  const double bz_axis = magnetic_field(Eigen::Vector3d(0, 0, z), g, kI).z();
  // straddle the branch switch at rho ~ 1e-6 * max(d, |z|)
  for (double rho : {1e-8 * kD, 0.9e-6 * kD, 1.1e-6 * kD, 1e-4 * kD}) {
    const Eigen::Vector3d b = magnetic_field(Eigen::Vector3d(rho, 0, z), g, kI);
    CHECK(b.z() == rel(bz_axis, 1e-9));
  }
  // B_rho grows linearly in rho near the axis
  const double brho1 =
      magnetic_field(Eigen::Vector3d(1e-5 * kD, 0, z), g, kI).x();
  const double brho2 =
      magnetic_field(Eigen::Vector3d(2e-5 * kD, 0, z), g, kI).x();
  CHECK(brho2 / brho1 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("field is divergence free") {
  LoopGeometry g(kD, kA);
  const double h = 1e-4 * kD;
  const Eigen::Vector3d pts[] = {
      {0.5 * kD, 0.2 * kD, 0.6 * kD},
      {1.5 * kD, -0.3 * kD, 0.2 * kD},
      {0.2 * kD, 0.1 * kD, -1.1 * kD},
      {3.0 * kD, 2.0 * kD, 1.0 * kD},
  };
  for (const Eigen::Vector3d& p : pts) {
    double div = 0.0;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
      // fourth-order central difference of B_i along axis i
      div += (-magnetic_field(p + 2 * h * e, g, kI)(i) +
              8.0 * magnetic_field(p + h * e, g, kI)(i) -
              8.0 * magnetic_field(p - h * e, g, kI)(i) +
              magnetic_field(p - 2 * h * e, g, kI)(i)) /
             (12.0 * h);
    }
    const double scale = magnetic_field(p, g, kI).norm() / kD;
    CHECK(std::abs(div) <= 1e-6 * scale);
  }
}

TEST_CASE("finite-difference curl agrees with the analytic field") {
  LoopGeometry g(kD, kA);
  const Eigen::Vector3d pts[] = {
      {2.0 * kD * std::sin(kPi / 3), 0.0, 2.0 * kD * std::cos(kPi / 3)},
      {0.3 * kD * std::sin(2.0), 0.0, 0.3 * kD * std::cos(2.0)},
      {0.7 * kD, 0.4 * kD, -0.9 * kD},
      {5.0 * kD, 1.0 * kD, 2.0 * kD},
  };
  for (const Eigen::Vector3d& p : pts) {
    const Eigen::Vector3d want = magnetic_field(p, g, kI);
    const Eigen::Vector3d got = magnetic_field_fd(p, g, kI);
    CHECK((got - want).norm() <= 1e-6 * want.norm());
  }
}

TEST_CASE("far field approaches the magnetic dipole") {
  LoopGeometry g(kD, kA);
  const double m = kI * kPi * kD * kD;  // dipole moment
  const double r = 100.0 * kD;
  for (double theta : {0.3, 1.0, 2.2}) {
    const double a_dip = kMu0 * m * std::sin(theta) / (4.0 * kPi * r * r);
    CHECK(vector_potential_phi(FieldPoint(r, theta), g, kI) ==
          rel(a_dip, 5e-4));

    const CylindricalField f = magnetic_field_cyl(FieldPoint(r, theta), g, kI);
    const double k = kMu0 * m / (4.0 * kPi * r * r * r);
    const double b_r = 2.0 * k * std::cos(theta);   // spherical components
    const double b_t = k * std::sin(theta);
    const double b_rho = b_r * std::sin(theta) + b_t * std::cos(theta);
    const double b_z = b_r * std::cos(theta) - b_t * std::sin(theta);
    CHECK(std::hypot(f.b_rho - b_rho, f.b_z - b_z) <=
          5e-4 * std::hypot(b_rho, b_z));
  }
}

TEST_CASE("placed loop transforms like the frame") {
  LoopGeometry g0(kD, kA);
  const Eigen::Vector3d center(2e-6, -1e-6, 0.5e-6);
  LoopGeometry g1(kD, kA, center, Eigen::Vector3d(1.0, 1.0, 1.0));

  CHECK(g1.axis.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(g1.e1.dot(g1.e2)) < 1e-14);
  CHECK(std::abs(g1.e1.dot(g1.axis)) < 1e-14);
  CHECK((g1.e1.cross(g1.e2) - g1.axis).norm() < 1e-14);  // right handed

  Eigen::Matrix3d rot;
  rot.col(0) = g1.e1;
  rot.col(1) = g1.e2;
  rot.col(2) = g1.axis;
  const Eigen::Vector3d locals[] = {
      {0.4 * kD, 0.1 * kD, 0.9 * kD},
      {1.8 * kD, -0.6 * kD, -0.3 * kD},
  };
  for (const Eigen::Vector3d& p : locals) {
    const Eigen::Vector3d lab = center + rot * p;
    CHECK((magnetic_field(lab, g1, kI) - rot * magnetic_field(p, g0, kI))
              .norm() <= 1e-12 * magnetic_field(p, g0, kI).norm());
    CHECK((vector_potential(lab, g1, kI) - rot * vector_potential(p, g0, kI))
              .norm() <= 1e-12 * vector_potential(p, g0, kI).norm() + 1e-30);
  }

  // from_lab inverts the placement
  const FieldPoint fp = FieldPoint::from_lab(
      center + rot * Eigen::Vector3d(0.3 * kD, 0.4 * kD, 1.2 * kD), g1);
  CHECK(fp.r == rel(std::hypot(0.5 * kD, 1.2 * kD), 1e-12));
  CHECK(fp.theta == rel(std::atan2(0.5, 1.2), 1e-12));
}

TEST_CASE("wire volume is refused") {
  LoopGeometry g(kD, kA);
  const FieldPoint on_wire(kD, kPi / 2.0);
  CHECK(inside_wire(on_wire, g));
  CHECK(inside_wire(Eigen::Vector3d(0.0, kD, 0.2 * kA), g));
  CHECK_FALSE(inside_wire(Eigen::Vector3d(0.0, kD + 2.0 * kA, 0.0), g));

  CHECK_THROWS_AS(vector_potential_phi(on_wire, g, kI), DomainError);
  CHECK_THROWS_AS(magnetic_field_cyl(on_wire, g, kI), DomainError);
  CHECK_THROWS_AS(magnetic_field(Eigen::Vector3d(kD, 0, 0), g, kI),
                  DomainError);

  // just outside the wire the field is finite and close to the straight-wire
  // value mu0 I / (2 pi s) at s = 2a from the wire center
  const Eigen::Vector3d near(kD + 2.0 * kA, 0.0, 0.0);
  const double b_near = magnetic_field(near, g, kI).norm();
  CHECK(std::isfinite(b_near));
  CHECK(b_near == doctest::Approx(kMu0 * kI / (kTwoPi * 2.0 * kA))
                      .epsilon(0.3)
                      .scale(0.0));
  CHECK(b_near > 2.0 * magnetic_field(Eigen::Vector3d::Zero(), g, kI).norm());
}

TEST_CASE("geometry and point validation") {
  CHECK_THROWS_AS(LoopGeometry(kD, 0.11 * kD), DomainError);  // thick wire
  CHECK_THROWS_AS(LoopGeometry(kD, 0.0), DomainError);
  CHECK_THROWS_AS(LoopGeometry(-kD, kA), DomainError);
  CHECK_THROWS_AS(
      LoopGeometry(kD, kA, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()),
      DomainError);
  CHECK_THROWS_AS(FieldPoint(-1e-6, 1.0), DomainError);
  CHECK_THROWS_AS(FieldPoint(1e-6, -0.1), DomainError);
  CHECK_THROWS_AS(FieldPoint(1e-6, 3.2), DomainError);
}

TEST_CASE("operator amplitude profiles") {
  LoopGeometry g(kD, kA);
  const double delta = kTwoPi * 6.835e9;  // hyperfine-scale splitting
  const Eigen::Vector3d p(0.8 * kD, 0.2 * kD, 1.1 * kD);
  const FieldOperatorAmplitudes amp = field_operator_amplitudes(p, g, kI, delta);
  CHECK(amp.b_sigma_z == magnetic_field(p, g, kI));
  CHECK((amp.e_sigma_y - delta * vector_potential(p, g, kI)).norm() <=
        1e-15 * amp.e_sigma_y.norm());
  // on the axis the transition amplitude vanishes with A
  CHECK(field_operator_amplitudes(Eigen::Vector3d(0, 0, kD), g, kI, delta)
            .e_sigma_y == Eigen::Vector3d::Zero());
}
