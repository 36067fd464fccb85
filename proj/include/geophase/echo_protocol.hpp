#pragma once

// Spin-echo measurement of the geometric phase.
//
// Round one follows the rotating field for duration T; a pi-pulse swaps the
// eigenbasis amplitudes; round two retraces the path with the rotation
// reversed. Dynamical phases cancel and the geometric phase doubles, so in the
// adiabatic limit arg(alpha(2T) conj(beta(2T))) equals 2 omega_rot T (1 - cos theta).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geophase/core_model.hpp"
#include "geophase/exact_solver.hpp"
#include "geophase/ode_oracle.hpp"

namespace geophase {

enum class Propagator { exact, ode, adiabatic, lab };

inline std::string_view to_string(Propagator p) {
  switch (p) {
    case Propagator::exact: return "exact";
    case Propagator::ode: return "ode";
    case Propagator::adiabatic: return "adiabatic";
    case Propagator::lab: return "lab";
  }
  return "?";
}

inline Propagator parse_propagator(std::string_view name) {
  if (name == "exact") return Propagator::exact;
  if (name == "ode") return Propagator::ode;
  if (name == "adiabatic") return Propagator::adiabatic;
  if (name == "lab") return Propagator::lab;
  throw InvalidParameter("unknown propagator '" + std::string(name) + "'");
}

/// Duration of one round of n loops, 2 pi n / |omega_rot|.
inline double round_duration(double omega_rot, double loops) {
  if (!std::isfinite(omega_rot) || omega_rot == 0.0) {
    throw InvalidParameter("omega_rot must be finite and non-zero for a round to exist");
  }
  if (!std::isfinite(loops) || !(loops > 0.0)) throw InvalidParameter("loops must be finite and positive");
  return 2.0 * std::numbers::pi * loops / std::abs(omega_rot);
}

/// Principal value in (-pi, pi].
inline double wrap_phase(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(x, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/// `principal` shifted by the multiple of 2 pi that brings it closest to `anchor`.
inline double unwrap_near(double principal, double anchor) {
  const double two_pi = 2.0 * std::numbers::pi;
  return principal + two_pi * std::round((anchor - principal) / two_pi);
}

/// Propagates amplitudes given on the basis at time 0 for duration t.
inline Amplitudes propagate(Propagator which, const DriveParams& params, const Amplitudes& amps, double t,
                            const IntegratorConfig& cfg = {}) {
  switch (which) {
    case Propagator::exact: return propagate_exact(params, amps, t);
    case Propagator::adiabatic: return propagate_adiabatic(params, amps, t);
    case Propagator::ode: return propagate_ode(params, amps, t, cfg);
    case Propagator::lab: {
      const LabSpinor psi = propagate_lab(params, from_eigenbasis(params, 0.0, amps), t, cfg);
      return to_eigenbasis(params, t, psi);
    }
  }
  throw std::logic_error("unhandled propagator");
}

/// Propagates amplitudes given on the basis at time t0 to time t0 + dt. The
/// amplitude equations are time-invariant in the rotating gauge, so this is a
/// gauge shift around `propagate`.
inline Amplitudes advance(Propagator which, const DriveParams& params, const Amplitudes& amps, double t0, double dt,
                          const IntegratorConfig& cfg = {}) {
  const Amplitudes shifted = to_rotating_gauge(amps, params.omega_rot, t0);
  return from_rotating_gauge(propagate(which, params, shifted, dt, cfg), params.omega_rot, t0);
}

struct EchoConfig {
  DriveParams params;
  double loops = 1.0;
  Propagator propagator = Propagator::exact;
  IntegratorConfig integrator{};
  Amplitudes initial = Amplitudes::equal_superposition();
};

struct EchoResult {
  double phi_na;      // measured phase, unwrapped toward phi_b
  double phi_b;       // Berry prediction
  double delta_phi;   // phi_na - phi_b in (-pi, pi]
  Amplitudes amps_mid;    // at T, after the pulse
  Amplitudes amps_final;  // at 2T
  double norm_error;  // | |amps_final|^2 - 1 |
};

/// The pi-pulse: plain swap of the eigenbasis amplitudes.
inline Amplitudes pi_pulse(const Amplitudes& a) { return {a.beta, a.alpha}; }

/// 2 omega_rot T (1 - cos theta); 4 pi n (1 - cos theta) for positive rotation.
inline double berry_phase(const EchoConfig& config) {
  const EigenFrame frame = eigenframe(config.params);
  const double period = round_duration(config.params.omega_rot, config.loops);
  return 2.0 * config.params.omega_rot * period * (1.0 - std::cos(frame.theta));
}

/// arg(alpha conj(beta)) in (-pi, pi].
inline double measured_phase(const Amplitudes& a) {
  constexpr double kFloor = 1e-12;
  if (std::abs(a.alpha) <= kFloor || std::abs(a.beta) <= kFloor) {
    throw UndefinedPhase("relative phase undefined: an amplitude vanishes");
  }
  return wrap_phase(std::arg(a.alpha * std::conj(a.beta)));
}

inline EchoResult run_echo(const EchoConfig& config) {
  validate(config.params);
  const double period = round_duration(config.params.omega_rot, config.loops);

  EchoResult r{};
  r.phi_b = berry_phase(config);
  const Amplitudes forward = propagate(config.propagator, config.params, config.initial, period, config.integrator);
  r.amps_mid = pi_pulse(forward);
  r.amps_final =
      propagate(config.propagator, config.params.reversed(), r.amps_mid, period, config.integrator);
  r.norm_error = std::abs(r.amps_final.norm_sq() - 1.0);

  const double principal = measured_phase(r.amps_final);
  r.phi_na = unwrap_near(principal, r.phi_b);
  r.delta_phi = wrap_phase(r.phi_na - r.phi_b);
  return r;
}

}  // namespace geophase
