#pragma once

// Closed-form propagation of the instantaneous-eigenbasis amplitudes.
//
// In the gauge beta' = beta e^{-i omega_rot t} the amplitude equations have
// constant coefficients,
//
//   d alpha/dt = -i(omega/2 + omega_rot sin^2(theta/2)) alpha + i beta' (omega_rot/2) sin(theta)
//   d beta'/dt =  i(omega/2 - omega_rot cos^2(theta/2)) beta' + i alpha (omega_rot/2) sin(theta)
//
// and are solved by two normal modes e^{i omega_plus t}, e^{i omega_minus t}.
// beta' never leaves this header's internals except through gauge helpers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "geophase/core_model.hpp"

namespace geophase {

/// Coordinates of a state on {|e(t)>, |g(t)>}.
struct Amplitudes {
  complex alpha;
  complex beta;

  [[nodiscard]] double norm_sq() const { return std::norm(alpha) + std::norm(beta); }

  /// alpha = beta = 1/sqrt(2), the echo protocol's default preparation.
  static Amplitudes equal_superposition() {
    const double h = 1.0 / std::numbers::sqrt2;
    return {complex(h), complex(h)};
  }
};

inline constexpr double kNormTolerance = 1e-9;

inline void require_normalized(const Amplitudes& a, const char* what) {
  if (!(std::abs(a.norm_sq() - 1.0) <= kNormTolerance)) {
    throw InvalidParameter(std::string(what) + ": amplitudes must be normalized");
  }
}

/// Switch to the constant-coefficient gauge at time t: (alpha, beta e^{-i omega_rot t}).
inline Amplitudes to_rotating_gauge(const Amplitudes& a, double omega_rot, double t) {
  return {a.alpha, a.beta * std::polar(1.0, -omega_rot * t)};
}

inline Amplitudes from_rotating_gauge(const Amplitudes& a, double omega_rot, double t) {
  return {a.alpha, a.beta * std::polar(1.0, omega_rot * t)};
}

/// Weights of the two normal modes: alpha = a1 e^{i w+ t} + a2 e^{i w- t},
/// beta' = b1 e^{i w+ t} + b2 e^{i w- t}.
struct ModeCoefficients {
  complex a1;
  complex a2;
  complex b1;
  complex b2;
};

inline ModeCoefficients mode_coefficients(const EigenFrame& frame, double omega_rot, const Amplitudes& amps0) {
  const double w = frame.omega;
  const double big = frame.big_omega;
  // Rounding in the closed forms scales like (omega + |omega_rot|)/Omega.
  const double scale = w + std::abs(omega_rot);
  if (!(big > scale * 1e-12)) {
    throw DegenerateMode("mode frequencies coincide (Omega = 0); closed form undefined");
  }
  const double coupling = omega_rot * std::sin(frame.theta);
  const complex al = amps0.alpha;
  const complex be = amps0.beta;
  ModeCoefficients c;
  c.a1 = (be * coupling + al * (-w + frame.sigma_plus)) / (2.0 * big);
  c.a2 = (-be * coupling + al * (w + frame.sigma_minus)) / (2.0 * big);
  c.b1 = (be * (w + frame.sigma_minus) + al * coupling) / (2.0 * big);
  c.b2 = (be * (-w + frame.sigma_plus) - al * coupling) / (2.0 * big);

  const double tol = 1e-12 * std::max(1.0, scale / big);
  if (std::abs(c.a1 + c.a2 - al) > tol || std::abs(c.b1 + c.b2 - be) > tol) {
    throw DegenerateMode("mode decomposition does not reproduce the initial amplitudes");
  }
  return c;
}

inline void require_duration(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("duration must be finite and non-negative");
}

/// Exact propagation for duration t starting from the basis at time 0.
inline Amplitudes propagate_exact(const DriveParams& params, const Amplitudes& amps0, double t) {
  require_duration(t);
  require_normalized(amps0, "propagate_exact");
  const EigenFrame frame = eigenframe(params);
  const ModeCoefficients c = mode_coefficients(frame, params.omega_rot, amps0);
  const complex up = std::polar(1.0, frame.omega_plus * t);
  const complex um = std::polar(1.0, frame.omega_minus * t);
  const Amplitudes rotating{c.a1 * up + c.a2 * um, c.b1 * up + c.b2 * um};
  return from_rotating_gauge(rotating, params.omega_rot, t);
}

/// Adiabatic approximation: the off-diagonal coupling is dropped, so each
/// amplitude keeps its norm and picks up dynamical plus geometric phase.
inline Amplitudes propagate_adiabatic(const DriveParams& params, const Amplitudes& amps0, double t) {
  require_duration(t);
  const EigenFrame frame = eigenframe(params);
  const double sh = std::sin(frame.theta / 2.0);
  const double rate = frame.omega / 2.0 + params.omega_rot * sh * sh;
  return {amps0.alpha * std::polar(1.0, -rate * t), amps0.beta * std::polar(1.0, rate * t)};
}

}  // namespace geophase
