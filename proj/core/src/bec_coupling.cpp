#include "squidbec/bec_coupling.hpp"

#include <cmath>

#include "gauss_hermite.hpp"
#include "squidbec/constants.hpp"
#include "squidbec/errors.hpp"

namespace squidbec {

namespace {

void require_real(const Eigen::Vector3cd& v, const char* what) {
  // Relative test: physical moments are ~1e-23 J/T, so an absolute floor
  // would never fire.
  if (v.imag().norm() > 1e-12 * v.norm()) {
    throw DomainError(std::string(what) +
                      ": diagonal moment matrix elements must be real");
  }
}

// Bilinear (unconjugated) dot product of a real and a complex 3-vector.
std::complex<double> bdot(const Eigen::Vector3d& a, const Eigen::Vector3cd& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

}  // namespace

MomentMatrix::MomentMatrix(const Eigen::Vector3cd& uu, const Eigen::Vector3cd& dd,
                           const Eigen::Vector3cd& du)
    : mu_uu(uu), mu_dd(dd), mu_du(du) {
  if (!uu.allFinite() || !dd.allFinite() || !du.allFinite()) {
    throw DomainError("moment matrix elements must be finite");
  }
  require_real(uu, "mu_uu");
  require_real(dd, "mu_dd");
}

MomentMatrix MomentMatrix::rb87_default(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d n = axis.normalized();
  const Eigen::Vector3cd nz = n.cast<std::complex<double>>();
  return MomentMatrix(kBohrMagneton * nz, -0.5 * kBohrMagneton * nz,
                      kBohrMagneton * nz);
}

BecParams::BecParams(double N, double omega_ho, double mass,
                     const Eigen::Vector3d& center, double e_hfs_,
                     const MomentMatrix& m)
    : atom_number(N),
      trap_frequency(omega_ho),
      atom_mass(mass),
      trap_center(center),
      e_hfs(e_hfs_),
      moments(m) {
  if (!(N >= 1.0) || !std::isfinite(N)) {
    throw DomainError("atom number must be >= 1");
  }
  if (!(omega_ho > 0.0) || !(mass > 0.0) || !(e_hfs_ > 0.0)) {
    throw DomainError("trap frequency, mass and splitting must be positive");
  }
  if (!center.allFinite()) throw DomainError("trap center must be finite");
}

double BecParams::oscillator_length() const {
  return std::sqrt(kHbar / (atom_mass * trap_frequency));
}

double ho_ground_state(const Eigen::Vector3d& r, const BecParams& p) {
  const double a = p.oscillator_length();
  const double q2 = (r - p.trap_center).squaredNorm();
  return std::pow(kPi * a * a, -0.75) * std::exp(-0.5 * q2 / (a * a));
}

namespace {

using SkipFn = std::function<bool(const Eigen::Vector3d&)>;

Eigen::Vector3d gh_field_average(const BecParams& p, const FieldFn& field,
                                 const SkipFn& skip, int n, long* skipped) {
  // \int |phi|^2 B d3r = pi^{-3/2} \int e^{-|u|^2} B(c + a_ho u) d3u.
  const auto gh = detail::gauss_hermite(n);
  const double a = p.oscillator_length();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double wij = gh.weights[i] * gh.weights[j];
      for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d r =
            p.trap_center +
            a * Eigen::Vector3d(gh.nodes[i], gh.nodes[j], gh.nodes[k]);
        if (skip && skip(r)) {
          ++(*skipped);
          continue;
        }
        acc += wij * gh.weights[k] * field(r);
      }
    }
  }
  return acc * std::pow(kPi, -1.5);
}

GMatrix coupling_impl(const BecParams& p, const FieldFn& field,
                      const SkipFn& skip, int nodes, double tol,
                      QuadratureInfo* info) {
  if (nodes < 4) throw DomainError("coupling quadrature needs >= 4 nodes");
  long skipped_coarse = 0, skipped_fine = 0;
  const Eigen::Vector3d coarse =
      gh_field_average(p, field, skip, nodes, &skipped_coarse);
  const Eigen::Vector3d fine =
      gh_field_average(p, field, skip, 2 * nodes, &skipped_fine);
  const double scale = std::max(fine.norm(), 1e-300);
  const double change = (fine - coarse).norm() / scale;
  if (change > tol) {
    throw NumericalError(
        "coupling quadrature did not converge on node doubling (relative "
        "change " +
        std::to_string(change) + ")");
  }
  if (info) {
    info->nodes_per_axis = 2 * nodes;
    info->skipped_nodes = skipped_fine;
    info->relative_change = change;
  }
  GMatrix g;
  for (auto& row : g) row.fill(fine);
  return g;
}

}  // namespace

GMatrix coupling_vectors(const BecParams& p, const LoopGeometry& geom,
                         double current, int nodes_per_axis,
                         double convergence_tol, QuadratureInfo* info) {
  if (inside_wire(p.trap_center, geom)) {
    throw DomainError("trap center lies inside the wire volume");
  }
  const FieldFn field = [&geom, current](const Eigen::Vector3d& r) {
    return magnetic_field(r, geom, current);
  };
  // Far Gaussian tails may graze the wire; those nodes carry weight
  // exp(-|u|^2) ~ 1e-20 and are dropped rather than evaluated on the
  // singular formula.
  const SkipFn skip = [&geom](const Eigen::Vector3d& r) {
    return inside_wire(r, geom);
  };
  return coupling_impl(p, field, skip, nodes_per_axis, convergence_tol, info);
}

GMatrix coupling_vectors(const BecParams& p, const FieldFn& field,
                         int nodes_per_axis, double convergence_tol,
                         QuadratureInfo* info) {
  return coupling_impl(p, field, nullptr, nodes_per_axis, convergence_tol,
                       info);
}

std::complex<double> rabi_frequency(const GMatrix& g, const BecParams& p) {
  // g[1][0] couples <down| ... |up>.
  return std::sqrt(p.atom_number) * bdot(g[1][0], p.moments.mu_du) / kHbar;
}

InteractionDecomposition interaction_decomposition(const GMatrix& g,
                                                   const BecParams& p) {
  const double guu = bdot(g[0][0], p.moments.mu_uu).real();
  const double gdd = bdot(g[1][1], p.moments.mu_dd).real();
  const double n = p.atom_number;
  InteractionDecomposition d;
  d.diagonal_shift = ((2.0 * n - 1.0) * gdd + guu) / (2.0 * kHbar);
  d.zz_coupling = (guu - gdd) / (2.0 * kHbar);
  const std::complex<double> omega = rabi_frequency(g, p);
  d.qubit_block << 0.0, omega, std::conj(omega), 0.0;
  return d;
}

Eigen::Matrix2cd bec_hamiltonian(const BecParams& p) {
  Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
  h(0, 0) = 0.5 * p.e_hfs;
  h(1, 1) = -0.5 * p.e_hfs;
  return h;
}

}  // namespace squidbec
