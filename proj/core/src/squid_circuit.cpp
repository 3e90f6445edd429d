#include "squidbec/squid_circuit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gauss_hermite.hpp"
#include "squidbec/constants.hpp"
#include "squidbec/errors.hpp"

namespace squidbec {

SquidParams::SquidParams(double L, double C, double Ic, double phi_ex_)
    : inductance(L), capacitance(C), critical_current(Ic), phi_ex(phi_ex_) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("inductance must be > 0");
  if (!(C > 0.0) || !std::isfinite(C)) throw DomainError("capacitance must be > 0");
  if (!(Ic > 0.0) || !std::isfinite(Ic)) {
    throw DomainError("critical current must be > 0");
  }
  if (!std::isfinite(phi_ex)) throw DomainError("phi_ex must be finite");
}

double SquidParams::beta_L() const {
  return kTwoPi * inductance * critical_current / kFluxQuantum;
}

double SquidParams::u0() const {
  return kFluxQuantum * kFluxQuantum / (4.0 * kPi * kPi * inductance);
}

double reduced_potential(double phi, double phi_ex, double beta_L) {
  const double dphi = phi - phi_ex;
  return 0.5 * kTwoPi * kTwoPi * dphi * dphi - beta_L * std::cos(kTwoPi * phi);
}

namespace {

// d(U/U0)/dphi and d2(U/U0)/dphi2.
double du(double phi, double phi_ex, double beta) {
  return kTwoPi * kTwoPi * (phi - phi_ex) + kTwoPi * beta * std::sin(kTwoPi * phi);
}

double d2u(double phi, double beta) {
  return kTwoPi * kTwoPi * (1.0 + beta * std::cos(kTwoPi * phi));
}

double potential_joule(const SquidParams& p, double phi) {
  return p.u0() * reduced_potential(phi, p.phi_ex, p.beta_L());
}

Extremum::Kind classify(double phi, double beta) {
  const double curv = d2u(phi, beta);
  const double scale = kTwoPi * kTwoPi * (1.0 + std::abs(beta));
  if (curv > 1e-9 * scale) return Extremum::Kind::Minimum;
  if (curv < -1e-9 * scale) return Extremum::Kind::Maximum;
  return Extremum::Kind::Degenerate;
}

}  // namespace

std::vector<Extremum> find_extrema(const SquidParams& p, int grid_points,
                                   double tol) {
  if (grid_points < 100) throw DomainError("extrema grid too coarse");
  const double beta = p.beta_L();
  const double lo = p.phi_ex - 1.0;
  const double hi = p.phi_ex + 1.0;
  std::vector<Extremum> out;
  double a = lo;
  double da = du(a, p.phi_ex, beta);
  for (int i = 1; i <= grid_points; ++i) {
    const double b = lo + (hi - lo) * i / grid_points;
    const double db = du(b, p.phi_ex, beta);
    if (da == 0.0) {
      out.push_back({a, classify(a, beta)});
    } else if ((da < 0.0) != (db < 0.0)) {
      // Bisect the bracket down to width tol.
      double x0 = a, x1 = b, d0 = da;
      int it = 0;
      for (; it < 200 && (x1 - x0) > tol; ++it) {
        const double m = 0.5 * (x0 + x1);
        const double dm = du(m, p.phi_ex, beta);
        if ((d0 < 0.0) == (dm < 0.0)) {
          x0 = m;
          d0 = dm;
        } else {
          x1 = m;
        }
      }
      if ((x1 - x0) > tol) {
        throw NumericalError("extremum refinement did not converge");
      }
      out.push_back({0.5 * (x0 + x1), classify(0.5 * (x0 + x1), beta)});
    }
    a = b;
    da = db;
  }
  return out;
}

double well_frequency(const SquidParams& p, double phi_min) {
  const double curv = 1.0 + p.beta_L() * std::cos(kTwoPi * phi_min);
  if (!(curv > 0.0)) {
    throw DomainError("well_frequency: point is not inside a stable well");
  }
  return std::sqrt(curv / (p.inductance * p.capacitance));
}

double GaussianState::operator()(double flux) const {
  const double d = flux - center_flux;
  return std::pow(alpha / kPi, 0.25) * std::exp(-0.5 * alpha * d * d);
}

namespace {

// <L| f |R> over flux.  The Gaussian product is itself a Gaussian
// exp(-abar (Phi - pbar)^2) damped by exp(-gamma); Gauss-Hermite quadrature
// on that measure integrates polynomial-times-smooth integrands to machine
// precision with a modest node count.
double well_matrix_element(const GaussianState& left, const GaussianState& right,
                           const std::function<double(double)>& f,
                           int nodes = 80) {
  const double al = left.alpha, ar = right.alpha;
  const double cl = left.center_flux, cr = right.center_flux;
  const double abar = 0.5 * (al + ar);
  const double pbar = (al * cl + ar * cr) / (al + ar);
  const double gamma = 0.5 * al * ar * (cl - cr) * (cl - cr) / (al + ar);
  const double norm = std::pow(al / kPi, 0.25) * std::pow(ar / kPi, 0.25);
  const auto gh = detail::gauss_hermite(nodes);
  const double inv_sqrt = 1.0 / std::sqrt(abar);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    sum += gh.weights[i] * f(pbar + gh.nodes[i] * inv_sqrt);
  }
  return norm * std::exp(-gamma) * inv_sqrt * sum;
}

}  // namespace

double well_state_overlap(const GaussianState& left, const GaussianState& right) {
  return well_matrix_element(left, right, [](double) { return 1.0; });
}

std::pair<GaussianState, GaussianState> gaussian_well_states(
    const SquidParams& p, const DoubleWellAnalysis& a) {
  GaussianState l{a.phi_min_left * kFluxQuantum,
                  p.capacitance * a.omega_left / kHbar};
  GaussianState r{a.phi_min_right * kFluxQuantum,
                  p.capacitance * a.omega_right / kHbar};
  return {l, r};
}

TunnelingEstimate tunneling_estimate(const SquidParams& p,
                                     const DoubleWellAnalysis& a) {
  const auto [left, right] = gaussian_well_states(p, a);
  const double ar = right.alpha;
  const double cr = right.center_flux;
  const auto h_weight = [&](double flux) {
    const double d = flux - cr;
    const double kinetic =
        kHbar * kHbar / (2.0 * p.capacitance) * (ar - ar * ar * d * d);
    return potential_joule(p, flux / kFluxQuantum) + kinetic;
  };
  const double lhr = well_matrix_element(left, right, h_weight);
  TunnelingEstimate est;
  est.delta = std::abs(-2.0 * lhr) / kHbar;
  est.two_level_valid = est.delta < std::min(a.omega_left, a.omega_right);
  return est;
}

double circulating_current(const SquidParams& p, const DoubleWellAnalysis& a,
                           double symmetry_tol) {
  const double dl = a.phi_min_left - p.phi_ex;
  const double dr = a.phi_min_right - p.phi_ex;
  if (std::abs(dl + dr) > symmetry_tol * std::abs(dl)) {
    throw DomainError(
        "circulating_current: wells are not symmetric about phi_ex");
  }
  return dl * kFluxQuantum / p.inductance;
}

DoubleWellAnalysis analyze_double_well(const SquidParams& p) {
  const auto extrema = find_extrema(p);
  std::vector<double> minima, maxima;
  bool degenerate = false;
  for (const auto& e : extrema) {
    switch (e.kind) {
      case Extremum::Kind::Minimum: minima.push_back(e.phi); break;
      case Extremum::Kind::Maximum: maxima.push_back(e.phi); break;
      case Extremum::Kind::Degenerate: degenerate = true; break;
    }
  }
  if (minima.size() != 2) {
    throw DomainError(
        "analyze_double_well: circuit is not in the double-well regime (" +
        std::to_string(minima.size()) + " minima found)");
  }
  DoubleWellAnalysis a;
  a.phi_min_left = minima[0];
  a.phi_min_right = minima[1];
  const auto barrier = std::find_if(maxima.begin(), maxima.end(), [&](double m) {
    return m > a.phi_min_left && m < a.phi_min_right;
  });
  if (barrier == maxima.end()) {
    throw DomainError("analyze_double_well: no barrier between the minima");
  }
  a.phi_barrier = *barrier;
  if (degenerate) {
    a.warnings.push_back("degenerate stationary point present (beta_L ~ 1)");
  }
  a.omega_left = well_frequency(p, a.phi_min_left);
  a.omega_right = well_frequency(p, a.phi_min_right);
  a.energy_left = potential_joule(p, a.phi_min_left);
  a.energy_right = potential_joule(p, a.phi_min_right);
  a.epsilon = (a.energy_left - a.energy_right) / kHbar;
  a.barrier_height = potential_joule(p, a.phi_barrier) -
                     std::max(a.energy_left, a.energy_right);
  const auto est = tunneling_estimate(p, a);
  a.delta_estimate = est.delta;
  a.two_level_valid = est.two_level_valid;
  if (!est.two_level_valid) {
    a.warnings.push_back(
        "tunneling estimate exceeds the well level spacing; "
        "two-level reduction unreliable");
  }
  a.circulating_current =
      (a.phi_min_left - p.phi_ex) * kFluxQuantum / p.inductance;
  const double dl = a.phi_min_left - p.phi_ex;
  const double dr = a.phi_min_right - p.phi_ex;
  if (std::abs(dl + dr) > 0.05 * std::abs(dl)) {
    a.warnings.push_back("wells noticeably asymmetric about phi_ex");
  }
  return a;
}

Eigen::Matrix2cd flux_qubit_hamiltonian(const FluxQubit& q) {
  Eigen::Matrix2cd h;
  h << 0.5 * q.epsilon, -0.5 * q.delta, -0.5 * q.delta, -0.5 * q.epsilon;
  return h;
}

}  // namespace squidbec
