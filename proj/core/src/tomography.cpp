#include "squidbec/tomography.hpp"

#include <algorithm>
#include <cmath>

#include "squidbec/errors.hpp"
#include "squidbec/rng.hpp"

namespace squidbec {

namespace {
using cd = std::complex<double>;
}

QubitDensityMatrix::QubitDensityMatrix(const Eigen::Matrix2cd& m) : rho(m) {
  if (!m.allFinite()) throw DomainError("density matrix must be finite");
  if (std::abs(m.trace().real() - 1.0) > 1e-12 ||
      std::abs(m.trace().imag()) > 1e-12) {
    throw DomainError("density matrix trace must be 1");
  }
  if ((m - m.adjoint()).norm() > 1e-12) {
    throw DomainError("density matrix must be Hermitian");
  }
}

QubitDensityMatrix QubitDensityMatrix::from_bloch(const Eigen::Vector3d& a) {
  Eigen::Matrix2cd m;
  m(0, 0) = 0.5 * (1.0 + a(2));
  m(1, 1) = 0.5 * (1.0 - a(2));
  m(0, 1) = 0.5 * cd(a(0), -a(1));
  m(1, 0) = 0.5 * cd(a(0), a(1));
  return QubitDensityMatrix(m);
}

Eigen::Vector3d QubitDensityMatrix::bloch() const {
  return Eigen::Vector3d(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
                         (rho(0, 0) - rho(1, 1)).real());
}

bool QubitDensityMatrix::is_physical(double tol) const {
  return bloch().norm() <= 1.0 + tol;
}

QubitDensityMatrix reduce_to_bec(const HybridState& psi) {
  const Eigen::Vector4cd& c = psi.amplitudes;
  Eigen::Matrix2cd m;
  m(0, 0) = std::norm(c(0)) + std::norm(c(1));
  m(1, 1) = std::norm(c(2)) + std::norm(c(3));
  m(0, 1) = c(0) * std::conj(c(2)) + c(1) * std::conj(c(3));
  m(1, 0) = std::conj(m(0, 1));
  // HybridState admits norms within 1e-9 of unity (integrator drift);
  // rescale so the reduction is exactly unit trace.
  m /= m.trace().real();
  return QubitDensityMatrix(m);
}

QubitDensityMatrix rotate_for_axis(const QubitDensityMatrix& rho, Axis axis) {
  if (axis == Axis::Z) return rho;
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  if (axis == Axis::X) {
    // (1 + i sy)/sqrt(2): maps <sx> onto <sz>.
    u << r, r, -r, r;
  } else {
    // (1 - i sx)/sqrt(2): maps <sy> onto <sz>.
    u << r, cd(0.0, -r), cd(0.0, -r), r;
  }
  return QubitDensityMatrix(u * rho.rho * u.adjoint());
}

MeasurementRecord simulate_shots(const QubitDensityMatrix& rho, Axis axis,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw DomainError("need at least one shot");
  const double az = rotate_for_axis(rho, axis).bloch()(2);
  const double p = std::clamp(0.5 * (1.0 + az), 0.0, 1.0);
  RandomStream stream(seed, static_cast<std::uint64_t>(axis));
  return {axis, shots, stream.bernoulli_count(shots, p), seed};
}

Reconstruction reconstruct(const std::array<MeasurementRecord, 3>& records) {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d se = Eigen::Vector3d::Zero();
  std::array<bool, 3> seen{false, false, false};
  for (const auto& rec : records) {
    const int i = static_cast<int>(rec.axis);
    if (i < 0 || i > 2 || seen[i]) {
      throw DomainError("reconstruction needs one record per axis");
    }
    if (rec.shots == 0 || rec.plus_count > rec.shots) {
      throw DomainError("invalid measurement record");
    }
    seen[i] = true;
    const double m = static_cast<double>(rec.shots);
    const double p = static_cast<double>(rec.plus_count) / m;
    a(i) = 2.0 * p - 1.0;
    se(i) = 2.0 * std::sqrt(p * (1.0 - p) / m);
  }
  Reconstruction out{a, se, QubitDensityMatrix::from_bloch(a), std::nullopt};
  if (a.norm() > 1.0) {
    out.rho_projected = QubitDensityMatrix::from_bloch(a / a.norm());
  }
  return out;
}

namespace {

// Target Bloch vector of alpha|0> + beta|1> in basis (|1>, |0>).
Eigen::Vector3d target_bloch(const cd& alpha, const cd& beta) {
  const cd r10 = beta * std::conj(alpha);
  return Eigen::Vector3d(2.0 * r10.real(), -2.0 * r10.imag(),
                         std::norm(beta) - std::norm(alpha));
}

}  // namespace

double bec_target_fidelity(const Eigen::Vector3d& a_hat,
                           const std::complex<double>& alpha,
                           const std::complex<double>& beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
    throw DomainError("target amplitudes are not normalized");
  }
  const Eigen::Vector3d b = target_bloch(alpha, beta);
  const double at = std::hypot(a_hat(0), a_hat(1));
  const double bt = std::hypot(b(0), b(1));
  const double f2 = 0.5 * (1.0 + a_hat(2) * b(2) + at * bt);
  return std::sqrt(std::max(f2, 0.0));
}

ExperimentResult transfer_fidelity_experiment(
    const HybridState& final_state, const std::complex<double>& alpha,
    const std::complex<double>& beta, std::uint64_t shots_per_axis,
    std::uint64_t seed, bool noiseless) {
  const QubitDensityMatrix rho = reduce_to_bec(final_state);
  std::array<MeasurementRecord, 3> records{};
  Reconstruction recon{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                       QubitDensityMatrix::from_bloch(Eigen::Vector3d::Zero()),
                       std::nullopt};
  if (noiseless) {
    const Eigen::Vector3d a = rho.bloch();
    for (int i = 0; i < 3; ++i) {
      const double p = std::clamp(0.5 * (1.0 + a(i)), 0.0, 1.0);
      const auto exact = static_cast<std::uint64_t>(
          std::llround(p * static_cast<double>(shots_per_axis)));
      records[i] = {static_cast<Axis>(i), shots_per_axis, exact, seed};
    }
    recon = Reconstruction{a, Eigen::Vector3d::Zero(), QubitDensityMatrix(rho),
                           std::nullopt};
  } else {
    for (int i = 0; i < 3; ++i) {
      records[i] =
          simulate_shots(rho, static_cast<Axis>(i), shots_per_axis, seed);
    }
    recon = reconstruct(records);
  }

  const Eigen::Vector3d a = recon.a_hat;
  const Eigen::Vector3d b = target_bloch(alpha, beta);
  const double f = bec_target_fidelity(a, alpha, beta);

  // Linearized error propagation through F(a); the transverse part enters
  // via |a_perp|.
  double var = 0.0;
  if (f > 1e-12) {
    const double at = std::hypot(a(0), a(1));
    const double bt = std::hypot(b(0), b(1));
    Eigen::Vector3d grad;
    if (at > 1e-300) {
      grad(0) = bt * a(0) / at / (4.0 * f);
      grad(1) = bt * a(1) / at / (4.0 * f);
    } else {
      grad(0) = grad(1) = bt / (4.0 * f * std::sqrt(2.0));
    }
    grad(2) = b(2) / (4.0 * f);
    for (int i = 0; i < 3; ++i) {
      var += grad(i) * grad(i) * recon.a_stderr(i) * recon.a_stderr(i);
    }
  }

  const double f_exact = bec_target_fidelity(rho.bloch(), alpha, beta);
  return ExperimentResult{recon, records, f, std::sqrt(var), f_exact};
}

}  // namespace squidbec
