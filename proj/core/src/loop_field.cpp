#include "squidbec/loop_field.hpp"

#include <cmath>

#include "squidbec/errors.hpp"

namespace squidbec {

namespace {

void require_finite(const Eigen::Vector3d& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": not finite");
}

// [(2 - k^2) K - 2 E] / k^2, the bracket of the loop vector potential.
// The direct AGM evaluation cancels catastrophically for small k (the
// bracket opens at order k^4), so below k^2 = 1/16 it switches to the
// Maclaurin series of the bracket itself.
double potential_bracket(double k2) {
  if (k2 <= 0.0) return 0.0;
  if (k2 < 1.0 / 16.0) {
    // (pi/2) sum_{m>=2} s_m k^(2m-2),  s_m = 2(c_m - e_m) - c_{m-1},
    // c_m the K-series coefficients, e_m = -c_m/(2m-1) the E-series ones.
    double c_prev = 0.25;  // c_1
    double power = k2;     // k^(2(m-1)) at m = 2
    double sum = 0.0;
    for (int m = 2; m < 200; ++m) {
      const double ratio = (2.0 * m - 1.0) / (2.0 * m);
      const double c = c_prev * ratio * ratio;
      const double s = 2.0 * c * (2.0 * m) / (2.0 * m - 1.0) - c_prev;
      const double term = s * power;
      sum += term;
      if (term < 1e-17 * sum) break;
      c_prev = c;
      power *= k2;
    }
    return 0.5 * kPi * sum;
  }
  const double k = std::sqrt(k2);
  return ((2.0 - k2) * elliptic_K(k) - 2.0 * elliptic_E(k)) / k2;
}

struct CylCoords {
  double rho, z;
};

CylCoords to_cyl(const FieldPoint& p) {
  return {p.r * std::sin(p.theta), p.r * std::cos(p.theta)};
}

void reject_wire(const CylCoords& c, const LoopGeometry& g) {
  const double dr = c.rho - g.loop_radius;
  if (dr * dr + c.z * c.z < g.wire_radius * g.wire_radius) {
    throw DomainError("field evaluation inside the wire volume");
  }
}

double a_phi(const CylCoords& c, const LoopGeometry& g, double current) {
  const double d = g.loop_radius;
  const double beta2 = (d + c.rho) * (d + c.rho) + c.z * c.z;
  const double beta = std::sqrt(beta2);
  const double k2 = 4.0 * d * c.rho / beta2;
  return kMu0 / (4.0 * kPi) * 4.0 * current * d / beta * potential_bracket(k2);
}

CylindricalField b_cyl(const CylCoords& c, const LoopGeometry& g,
                       double current) {
  const double d = g.loop_radius;
  const double rho = c.rho, z = c.z;
  const double axis_scale = std::max(d, std::abs(z));
  if (rho < 1e-6 * axis_scale) {
    // Near-axis limit: B_z from the on-axis closed form, B_rho from the
    // leading paraxial term -(rho/2) dB_z/dz (relative error O(rho^2/d^2)).
    const double s = d * d + z * z;
    const double bz = kMu0 * current * d * d / (2.0 * std::pow(s, 1.5));
    const double brho =
        0.75 * kMu0 * current * d * d * z * rho / std::pow(s, 2.5);
    return {brho, bz};
  }
  const double alpha2 = (d - rho) * (d - rho) + z * z;
  const double beta2 = (d + rho) * (d + rho) + z * z;
  const double beta = std::sqrt(beta2);
  const double k = std::sqrt(4.0 * d * rho / beta2);
  const double K = elliptic_K(k);
  const double E = elliptic_E(k);
  const double pref = kMu0 * current / (2.0 * kPi * beta);
  const double bz = pref * (K + E * (d * d - rho * rho - z * z) / alpha2);
  const double brho =
      pref * (z / rho) * (E * (d * d + rho * rho + z * z) / alpha2 - K);
  return {brho, bz};
}

}  // namespace

LoopGeometry::LoopGeometry(double d, double a, const Eigen::Vector3d& c,
                           const Eigen::Vector3d& n)
    : loop_radius(d), wire_radius(a), center(c) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DomainError("loop radius must be positive");
  }
  if (!(a > 0.0) || !(a < d / 10.0)) {
    throw DomainError("wire radius must satisfy 0 < a < d/10 (thin wire)");
  }
  require_finite(c, "loop center");
  const double norm = n.norm();
  if (!(norm > 0.0) || !n.allFinite()) {
    throw DomainError("loop axis must be a nonzero vector");
  }
  axis = n / norm;
  // Right-handed triad (e1, e2, axis).
  Eigen::Vector3d u = Eigen::Vector3d::UnitX();
  if (std::abs(axis.x()) > 0.9) u = Eigen::Vector3d::UnitY();
  e1 = u.cross(axis).normalized();
  e2 = axis.cross(e1);
}

FieldPoint::FieldPoint(double r_, double theta_) : r(r_), theta(theta_) {
  if (!std::isfinite(r) || !std::isfinite(theta) || r < 0.0 || theta < 0.0 ||
      theta > kPi) {
    throw DomainError("field point requires r >= 0 and theta in [0, pi]");
  }
}

FieldPoint FieldPoint::from_lab(const Eigen::Vector3d& lab_point,
                                const LoopGeometry& g) {
  require_finite(lab_point, "field point");
  const Eigen::Vector3d q = lab_point - g.center;
  const double r = q.norm();
  if (r == 0.0) return FieldPoint(0.0, 0.0);
  double c = q.dot(g.axis) / r;
  c = std::clamp(c, -1.0, 1.0);
  return FieldPoint(r, std::acos(c));
}

bool inside_wire(const FieldPoint& p, const LoopGeometry& g) {
  const CylCoords c = to_cyl(p);
  const double dr = c.rho - g.loop_radius;
  return dr * dr + c.z * c.z < g.wire_radius * g.wire_radius;
}

bool inside_wire(const Eigen::Vector3d& lab_point, const LoopGeometry& g) {
  return inside_wire(FieldPoint::from_lab(lab_point, g), g);
}

double elliptic_K(double k) {
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("elliptic_K: modulus must lie in [0, 1)");
  }
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  // Quadratic convergence: ~5 iterations; the cap guards against a last-ulp
  // oscillation of the pair.
  for (int i = 0; i < 40 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double elliptic_E(double k) {
  if (!(k >= 0.0) || k > 1.0) {
    throw DomainError("elliptic_E: modulus must lie in [0, 1]");
  }
  if (k == 1.0) return 1.0;
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double csum = 0.5 * c * c;
  double pow2 = 0.5;  // 2^(n-1)
  for (int i = 0; i < 40 && std::abs(c) > 1e-16 * a; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    csum += pow2 * c * c;
  }
  return kPi / (2.0 * a) * (1.0 - csum);
}

double vector_potential_phi(const FieldPoint& p, const LoopGeometry& g,
                            double current) {
  const CylCoords c = to_cyl(p);
  reject_wire(c, g);
  return a_phi(c, g, current);
}

CylindricalField magnetic_field_cyl(const FieldPoint& p, const LoopGeometry& g,
                                    double current) {
  const CylCoords c = to_cyl(p);
  reject_wire(c, g);
  return b_cyl(c, g, current);
}

namespace {

struct LoopFrame {
  CylCoords cyl;
  Eigen::Vector3d e_rho;  // lab-frame unit vectors; e_rho only valid rho > 0
  Eigen::Vector3d e_phi;
  bool on_axis;
};

LoopFrame decompose(const Eigen::Vector3d& lab_point, const LoopGeometry& g) {
  require_finite(lab_point, "field point");
  const Eigen::Vector3d q = lab_point - g.center;
  const double z = q.dot(g.axis);
  const Eigen::Vector3d q_perp = q - z * g.axis;
  const double rho = q_perp.norm();
  LoopFrame f;
  f.cyl = {rho, z};
  f.on_axis = rho <= 0.0;
  if (!f.on_axis) {
    f.e_rho = q_perp / rho;
    f.e_phi = g.axis.cross(f.e_rho);
  } else {
    f.e_rho = Eigen::Vector3d::Zero();
    f.e_phi = Eigen::Vector3d::Zero();
  }
  return f;
}

}  // namespace

Eigen::Vector3d vector_potential(const Eigen::Vector3d& lab_point,
                                 const LoopGeometry& g, double current) {
  const LoopFrame f = decompose(lab_point, g);
  reject_wire(f.cyl, g);
  if (f.on_axis) return Eigen::Vector3d::Zero();
  return a_phi(f.cyl, g, current) * f.e_phi;
}

Eigen::Vector3d magnetic_field(const Eigen::Vector3d& lab_point,
                               const LoopGeometry& g, double current) {
  const LoopFrame f = decompose(lab_point, g);
  reject_wire(f.cyl, g);
  const CylindricalField b = b_cyl(f.cyl, g, current);
  if (f.on_axis) return b.b_z * g.axis;
  return b.b_rho * f.e_rho + b.b_z * g.axis;
}

Eigen::Vector3d magnetic_field_fd(const Eigen::Vector3d& lab_point,
                                  const LoopGeometry& g, double current) {
  const double r = (lab_point - g.center).norm();
  const double h = 1e-6 * std::max(r, g.loop_radius);
  // Sixth-order central first derivative.
  const auto deriv = [&](int component, int direction) {
    static const double w[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    step(direction) = h;
    double acc = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const Eigen::Vector3d plus =
          vector_potential(lab_point + k * step, g, current);
      const Eigen::Vector3d minus =
          vector_potential(lab_point - k * step, g, current);
      acc += w[k - 1] * (plus(component) - minus(component));
    }
    return acc / h;
  };
  return Eigen::Vector3d(deriv(2, 1) - deriv(1, 2),   // dAz/dy - dAy/dz
                         deriv(0, 2) - deriv(2, 0),   // dAx/dz - dAz/dx
                         deriv(1, 0) - deriv(0, 1));  // dAy/dx - dAx/dy
}

FieldOperatorAmplitudes field_operator_amplitudes(
    const Eigen::Vector3d& lab_point, const LoopGeometry& g, double current,
    double delta) {
  FieldOperatorAmplitudes out;
  out.b_sigma_z = magnetic_field(lab_point, g, current);
  out.e_sigma_y = vector_potential(lab_point, g, current) * delta;
  return out;
}

}  // namespace squidbec
