#include "squidbec/hybrid_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "squidbec/errors.hpp"

namespace squidbec {

namespace {
constexpr double kPi = 3.14159265358979323846;
using cd = std::complex<double>;
const cd kI{0.0, 1.0};
}  // namespace

RampSchedule::RampSchedule(double on, double off, double tau_, double w_off_)
    : t_on(on), t_off(off), tau(tau_), w_off(w_off_) {
  if (!std::isfinite(on) || !std::isfinite(off) || !std::isfinite(tau_) ||
      !std::isfinite(w_off_)) {
    throw DomainError("ramp schedule parameters must be finite");
  }
  if (!(off > on)) throw DomainError("ramp schedule needs t_off > t_on");
  if (!(tau_ > 0.0)) throw DomainError("ramp sharpness tau must be positive");
  if (!(w_off_ > 0.0 && w_off_ < 1.0)) {
    throw DomainError("off-resonance plateau w_off must lie in (0, 1)");
  }
}

double ramp_window(double t, const RampSchedule& s) {
  return s.w_off + (1.0 - s.w_off) * 0.5 *
                       (std::tanh((t - s.t_on) / s.tau) -
                        std::tanh((t - s.t_off) / s.tau));
}

namespace {

double window_peak(const RampSchedule& s) {
  // W is symmetric about the midpoint, where it peaks.
  return ramp_window(0.5 * (s.t_on + s.t_off), s);
}

// Bisect for the time where W crosses `level` inside [lo, hi]; `rising`
// selects which bracket half to keep.  The edges of W are monotone, which is
// all this is used on.
double cross_time(const RampSchedule& s, double lo, double hi, double level,
                  bool rising) {
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool below = ramp_window(mid, s) < level;
    if (below == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// A point safely on the off-plateau before the rising edge.
double plateau_time(const RampSchedule& s) {
  double lo = s.t_on - 60.0 * s.tau;
  for (int i = 0; i < 100 && ramp_window(lo, s) > 1.0000001 * s.w_off; ++i) {
    lo -= 60.0 * s.tau;
  }
  return lo;
}

}  // namespace

double measured_ramp_time(const RampSchedule& s) {
  if (1.01 * s.w_off >= 0.99) {
    throw DomainError(
        "off-plateau too close to resonance to define a ramp time");
  }
  if (window_peak(s) < 0.99) {
    throw NumericalError("schedule never gets within 1% of resonance");
  }
  const double mid = 0.5 * (s.t_on + s.t_off);
  const double lo = plateau_time(s);
  const double t_leave = cross_time(s, lo, mid, 1.01 * s.w_off, true);
  const double t_arrive = cross_time(s, t_leave, mid, 0.99, true);
  return t_arrive - t_leave;
}

double resonant_window(const RampSchedule& s) {
  if (window_peak(s) < 0.99) {
    throw NumericalError("schedule never gets within 1% of resonance");
  }
  const double mid = 0.5 * (s.t_on + s.t_off);
  const double lo = plateau_time(s);
  const double hi = s.t_off + 60.0 * s.tau;
  const double t1 = cross_time(s, lo, mid, 0.99, true);
  const double t2 = cross_time(s, mid, hi, 0.99, false);
  return t2 - t1;
}

ProtocolWindow calibrated_window(double ramp_seconds, double hold_phase,
                                 double omega_mag, double w_off) {
  if (!(ramp_seconds > 0.0) || !std::isfinite(ramp_seconds)) {
    throw DomainError("ramp time must be positive");
  }
  if (!(hold_phase > 0.0)) throw DomainError("hold phase must be positive");
  if (!(omega_mag > 0.0)) {
    throw DomainError("cannot calibrate a hold against zero Rabi coupling");
  }
  if (!(w_off > 0.0) || !(1.01 * w_off < 0.99)) {
    throw DomainError("w_off must lie in (0, 0.99/1.01)");
  }
  // Saturated-plateau crossings of the rising edge: 1.01 w_off at x1, 0.99 at
  // x2 (in units of tau).
  const double x1 = std::atanh(0.02 * w_off / (1.0 - w_off) - 1.0);
  const double x2 = std::atanh(2.0 * (0.99 - w_off) / (1.0 - w_off) - 1.0);
  const double tau = ramp_seconds / (x2 - x1);
  const double t_on = 10.0 * tau;
  const double t_hold = hold_phase / omega_mag;

  const auto window_of = [&](double t_off) {
    const RampSchedule trial(t_on, t_off, tau, w_off);
    try {
      return resonant_window(trial);
    } catch (const NumericalError&) {
      return -1.0;  // never resonant: shorter than any positive target
    }
  };
  // resonant_window grows monotonically with t_off; bracket and bisect.
  double lo = t_on + 2.0 * x2 * tau;
  double hi = lo + 2.0 * t_hold + 20.0 * tau;
  for (int i = 0; i < 50 && window_of(hi) < t_hold; ++i) hi += 2.0 * t_hold;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (window_of(mid) < t_hold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t_off = 0.5 * (lo + hi);
  return ProtocolWindow{RampSchedule(t_on, t_off, tau, w_off), 0.0,
                        t_off + 10.0 * tau};
}

HybridState::HybridState(const Eigen::Vector4cd& amps) : amplitudes(amps) {
  if (!amps.allFinite()) throw DomainError("state amplitudes must be finite");
  if (std::abs(amps.norm() - 1.0) > 1e-9) {
    throw DomainError("state is not normalized");
  }
}

Eigen::Matrix4cd hamiltonian_at(double t, const RampSchedule& s,
                                const HybridParams& p) {
  const double e = p.e_hfs;
  const double delta = e * ramp_window(t, s);
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 0) = 0.5 * (e + delta);
  h(1, 1) = 0.5 * (e - delta);
  h(2, 2) = 0.5 * (delta - e);
  h(3, 3) = -0.5 * (e + delta);
  h(0, 3) = h(1, 2) = -p.omega;
  h(3, 0) = h(2, 1) = -std::conj(p.omega);
  double sym = 0.0, anti = 0.0;  // couplings on (11<->10) and (01<->00)
  if (p.include_shift) {
    sym -= p.diagonal_shift;
    anti -= p.diagonal_shift;
  }
  if (p.include_zz) {
    sym -= p.zz_coupling;
    anti += p.zz_coupling;
  }
  h(0, 1) += sym;
  h(1, 0) += sym;
  h(2, 3) += anti;
  h(3, 2) += anti;
  return h;
}

std::pair<double, double> phase_optimized_fidelity(
    const Eigen::Vector4cd& target, const Eigen::Vector4cd& psi) {
  // B = 1 components live at indices 0, 1; B = 0 at 2, 3.
  const cd upper = std::conj(target(0)) * psi(0) + std::conj(target(1)) * psi(1);
  const cd lower = std::conj(target(2)) * psi(2) + std::conj(target(3)) * psi(3);
  const double f = std::min(std::abs(upper) + std::abs(lower), 1.0);
  double chi = 0.0;
  if (std::abs(upper) > 1e-300 && std::abs(lower) > 1e-300) {
    chi = std::arg(upper) - std::arg(lower);
  }
  return {f, chi};
}

double concurrence(const Eigen::Vector4cd& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

namespace {

// One unitary SU(2) step exp(-i (a . sigma) dt) applied in place to the
// amplitude pair (u, v).
inline void su2_step(cd& u, cd& v, double ax, double ay, double az,
                     double dt) {
  const double a = std::sqrt(ax * ax + ay * ay + az * az);
  const double theta = a * dt;
  const double c = std::cos(theta);
  const double s = (a > 0.0) ? std::sin(theta) / a : dt;
  const cd u00 = cd(c, -s * az);
  const cd u01 = cd(-s * ay, -s * ax);
  const cd u10 = cd(s * ay, -s * ax);
  const cd u11 = cd(c, s * az);
  const cd nu = u00 * u + u01 * v;
  const cd nv = u10 * u + u11 * v;
  u = nu;
  v = nv;
}

struct BlochVec {
  double x, y, z;
};

// Bloch vector of the reduced condensate qubit, basis (|1>, |0>).
BlochVec reduced_bloch(const Eigen::Vector4cd& psi) {
  const cd r10 = psi(0) * std::conj(psi(2)) + psi(1) * std::conj(psi(3));
  const double p1 = std::norm(psi(0)) + std::norm(psi(1));
  const double p0 = std::norm(psi(2)) + std::norm(psi(3));
  return {2.0 * r10.real(), -2.0 * r10.imag(), p1 - p0};
}

double reduced_fidelity(const Eigen::Vector4cd& target,
                        const Eigen::Vector4cd& psi) {
  const BlochVec a = reduced_bloch(psi);
  const BlochVec b = reduced_bloch(target);
  const double at = std::hypot(a.x, a.y);
  const double bt = std::hypot(b.x, b.y);
  const double f2 = 0.5 * (1.0 + a.z * b.z + at * bt);
  return std::sqrt(std::clamp(f2, 0.0, 1.0));
}

}  // namespace

ProtocolResult evolve(const HybridState& initial, const RampSchedule& s,
                      const HybridParams& p, const Eigen::Vector4cd& target,
                      double t_start, double t_end,
                      const IntegratorOptions& opt) {
  if (!(p.e_hfs > 0.0)) throw DomainError("e_hfs must be positive");
  if (!(t_end > t_start)) throw DomainError("evolve needs t_end > t_start");
  if (!(opt.step_fraction > 0.0 && opt.step_fraction <= 0.5)) {
    throw DomainError("step_fraction must lie in (0, 0.5]");
  }
  if (opt.output_samples < 2) throw DomainError("need at least 2 samples");
  if (std::abs(target.norm() - 1.0) > 1e-9) {
    throw DomainError("target state is not normalized");
  }

  const double e = p.e_hfs;
  const bool rotating = opt.frame == Frame::Rotating;
  const bool general = p.include_zz || p.include_shift;

  // Fastest retained angular frequency: the counter-rotating term still
  // oscillates at 2 E_hfs in the rotating frame.
  double fastest = rotating ? 2.0 * e : e;
  fastest = std::max({fastest, std::abs(p.omega), std::abs(p.zz_coupling),
                      std::abs(p.diagonal_shift)});
  double dt_max = opt.step_fraction * 2.0 * kPi / fastest;
  dt_max = std::min(dt_max, s.tau / 5.0);

  const double span = t_end - t_start;
  const int nsamp = opt.output_samples;
  const double seg = span / (nsamp - 1);
  const double steps_needed = std::ceil(seg / dt_max);
  if (!(steps_needed < 2e9) ||
      steps_needed * static_cast<double>(nsamp - 1) > 4e9) {
    throw NumericalError("time step underflows the protocol span");
  }
  const long steps_per_seg = std::max(1L, static_cast<long>(steps_needed));
  const double dt = seg / static_cast<double>(steps_per_seg);
  if (!(dt > 0.0) || t_start + dt == t_start) {
    throw NumericalError("time step underflows the protocol span");
  }

  // Frame phases: psi_lab = U_f(t) psi_rot, U_f = diag(e^{-iEt},1,1,e^{+iEt}).
  const auto to_lab = [&](double t, const Eigen::Vector4cd& v) {
    if (!rotating) return v;
    Eigen::Vector4cd out = v;
    out(0) *= std::exp(cd(0.0, -e * t));
    out(3) *= std::exp(cd(0.0, e * t));
    return out;
  };

  Eigen::Vector4cd psi = initial.amplitudes;
  if (rotating) {
    psi(0) *= std::exp(cd(0.0, e * t_start));
    psi(3) *= std::exp(cd(0.0, -e * t_start));
  }

  ProtocolResult res{
      {},   initial.amplitudes, 0.0, 0.0, 0.0, 0.0, 0.0,
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(),
      0.0,  s,   t_start, t_end};
  res.samples.reserve(nsamp);

  const auto record = [&](double t) {
    const Eigen::Vector4cd lab = to_lab(t, psi);
    const double drift = std::abs(lab.norm() - 1.0);
    res.norm_drift = std::max(res.norm_drift, drift);
    if (drift > opt.norm_tolerance) {
      throw NumericalError("norm drift " + std::to_string(drift) +
                           " exceeds tolerance at t = " + std::to_string(t));
    }
    Sample smp;
    smp.t = t;
    smp.w = ramp_window(t, s);
    smp.f_raw = std::min(std::abs(target.dot(lab)), 1.0);
    smp.f_opt = phase_optimized_fidelity(target, lab).first;
    for (int i = 0; i < 4; ++i) smp.populations[i] = std::norm(lab(i));
    const Eigen::Matrix4cd h = hamiltonian_at(t, s, p);
    smp.energy = (lab.adjoint() * h * lab)(0).real();
    res.samples.push_back(smp);
  };

  const auto step_blocks = [&](double tm) {
    const double delta = e * ramp_window(tm, s);
    cd om_a = p.omega;  // coupling inside the {11, 00} block
    double az_a = 0.5 * (e + delta);
    if (rotating) {
      om_a *= std::exp(cd(0.0, 2.0 * e * tm));
      az_a = 0.5 * (delta - e);
    }
    su2_step(psi(0), psi(3), -om_a.real(), om_a.imag(), az_a, dt);
    // {10, 01} block: counter-rotating phase cancels, same in both frames.
    su2_step(psi(1), psi(2), -p.omega.real(), p.omega.imag(),
             0.5 * (e - delta), dt);
  };

  const auto step_general = [&](double tm) {
    Eigen::Matrix4cd h = hamiltonian_at(tm, s, p);
    if (rotating) {
      Eigen::Vector4cd f;
      f << std::exp(cd(0.0, -e * tm)), 1.0, 1.0, std::exp(cd(0.0, e * tm));
      h = f.conjugate().asDiagonal() * h * f.asDiagonal();
      h(0, 0) -= e;
      h(3, 3) += e;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) {
      phases(i) = std::exp(cd(0.0, -es.eigenvalues()(i) * dt));
    }
    psi = es.eigenvectors() * (phases.asDiagonal() *
                               (es.eigenvectors().adjoint() * psi));
  };

  record(t_start);
  for (int k = 0; k < nsamp - 1; ++k) {
    const double seg_start = t_start + k * seg;
    for (long j = 0; j < steps_per_seg; ++j) {
      const double tm = seg_start + (j + 0.5) * dt;
      if (general) {
        step_general(tm);
      } else {
        step_blocks(tm);
      }
    }
    record(k + 1 == nsamp - 1 ? t_end : seg_start + seg);
  }

  const Eigen::Vector4cd lab_final = to_lab(t_end, psi);
  res.final_state = lab_final;
  res.f_raw_final = std::min(std::abs(target.dot(lab_final)), 1.0);
  const auto [fopt, chi] = phase_optimized_fidelity(target, lab_final);
  res.f_opt_final = fopt;
  res.optimal_phase = chi;
  res.concurrence_final = concurrence(lab_final);
  res.bec_fidelity_final = reduced_fidelity(target, lab_final);
  try {
    res.measured_ramp_seconds = measured_ramp_time(s);
    res.measured_hold_seconds = resonant_window(s);
  } catch (const NumericalError&) {
    // never-resonant custom schedules: leave the diagnostics as NaN
  }
  return res;
}

ProtocolResult transfer_protocol(const std::complex<double>& alpha,
                                 const std::complex<double>& beta,
                                 const HybridParams& p, double ramp_seconds,
                                 const IntegratorOptions& opt, double w_off) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
    throw DomainError("transfer amplitudes are not normalized");
  }
  const double om = std::abs(p.omega);
  const ProtocolWindow w =
      calibrated_window(ramp_seconds, 0.5 * kPi, om, w_off);
  Eigen::Vector4cd init, target;
  init << 0.0, 0.0, beta, alpha;    // alpha|00> + beta|01>
  target << 0.0, beta, 0.0, alpha;  // alpha|00> + beta|10>
  return evolve(HybridState(init), w.schedule, p, target.normalized(),
                w.t_start, w.t_end, opt);
}

ProtocolResult entangle_protocol(const HybridParams& p, double ramp_seconds,
                                 const IntegratorOptions& opt, double w_off) {
  const double om = std::abs(p.omega);
  const ProtocolWindow w =
      calibrated_window(ramp_seconds, 0.25 * kPi, om, w_off);
  Eigen::Vector4cd init, target;
  init << 0.0, 0.0, 1.0, 0.0;  // |01>
  const double r = 1.0 / std::sqrt(2.0);
  target << 0.0, r, r, 0.0;    // (|10> + |01>)/sqrt(2), chi picked up later
  return evolve(HybridState(init), w.schedule, p, target, w.t_start, w.t_end,
                opt);
}

std::vector<SweepRow> sweep_ramp_times(const HybridParams& p,
                                       const std::vector<double>& ramps,
                                       const IntegratorOptions& opt,
                                       double w_off) {
  std::vector<std::future<double>> jobs;
  jobs.reserve(ramps.size());
  for (const double ramp : ramps) {
    jobs.push_back(std::async(std::launch::async, [&, ramp] {
      return transfer_protocol(0.0, 1.0, p, ramp, opt, w_off).f_opt_final;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(ramps.size());
  for (std::size_t i = 0; i < ramps.size(); ++i) {
    rows.push_back({ramps[i], jobs[i].get()});
  }
  return rows;
}

}  // namespace squidbec
