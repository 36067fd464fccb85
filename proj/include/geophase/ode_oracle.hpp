#pragma once

// Fixed-step RK4 reference propagators. They share no code with the closed
// forms in exact_solver.hpp beyond the drive parameters, so the two can be
// checked against each other.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "geophase/core_model.hpp"
#include "geophase/exact_solver.hpp"

namespace geophase {

struct IntegratorConfig {
  double step = 1e-3;
  std::size_t max_steps = 50'000'000;
};

/// Largest |h * frequency| the integrators accept.
inline constexpr double kResolutionGuard = 0.1;

/// Fastest rate in the problem: max(omega, |omega_plus|, |omega_minus|, |omega_rot|).
inline double fastest_rate(const DriveParams& p) {
  const EigenFrame f = eigenframe(p);
  return std::max({f.omega, std::abs(f.omega_plus), std::abs(f.omega_minus), std::abs(p.omega_rot)});
}

/// Number of RK4 steps needed to cover t, the last one possibly partial.
inline std::size_t plan_steps(const DriveParams& p, double t, const IntegratorConfig& cfg) {
  require_duration(t);
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw InvalidParameter("integrator step must be positive");
  const double rate = fastest_rate(p);
  if (cfg.step * rate > kResolutionGuard) {
    std::ostringstream os;
    os << "step " << cfg.step << " too large: h*rate = " << cfg.step * rate << " > " << kResolutionGuard;
    throw StepTooLarge(os.str());
  }
  const double needed = std::ceil(t / cfg.step);
  if (needed > static_cast<double>(cfg.max_steps)) {
    std::ostringstream os;
    os << "integration needs " << needed << " steps, budget is " << cfg.max_steps;
    throw StepBudgetExceeded(os.str());
  }
  return static_cast<std::size_t>(needed);
}

/// Classical fourth-order Runge-Kutta from t0 to t0 + duration. `State` needs
/// vector-space operators (+, scalar *); `Rhs` is callable as rhs(t, state).
template <typename State, typename Rhs>
State rk4_integrate(Rhs&& rhs, State y, double t0, double duration, double step, std::size_t steps) {
  double t = t0;
  const double t_end = t0 + duration;
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = std::min(step, t_end - t);
    if (h <= 0.0) break;
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + h / 2, y + (h / 2) * k1);
    const State k3 = rhs(t + h / 2, y + (h / 2) * k2);
    const State k4 = rhs(t + h, y + h * k3);
    y = y + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // Land exactly on t_end on the final step instead of accumulating sums.
    t = (i + 1 == steps) ? t_end : t0 + static_cast<double>(i + 1) * step;
  }
  return y;
}

namespace detail {

/// Minimal two-component vector for the integrators.
struct Vec2 {
  complex x;
  complex y;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }

}  // namespace detail

/// RK4 on the (alpha, beta') amplitude equations; returns (alpha, beta) at t.
inline Amplitudes propagate_ode(const DriveParams& params, const Amplitudes& amps0, double t,
                                const IntegratorConfig& cfg = {}) {
  require_normalized(amps0, "propagate_ode");
  const std::size_t steps = plan_steps(params, t, cfg);
  const double theta = std::atan2(params.omega_rabi, params.delta);
  const double omega = std::hypot(params.delta, params.omega_rabi);
  const double wr = params.omega_rot;
  const double sh = std::sin(theta / 2.0);
  const double ch = std::cos(theta / 2.0);
  const complex d_alpha(0.0, -(omega / 2.0 + wr * sh * sh));
  const complex d_beta(0.0, omega / 2.0 - wr * ch * ch);
  const complex coupling(0.0, wr / 2.0 * std::sin(theta));

  const auto rhs = [&](double, const detail::Vec2& v) -> detail::Vec2 {
    return {d_alpha * v.x + coupling * v.y, d_beta * v.y + coupling * v.x};
  };
  const detail::Vec2 end = rk4_integrate(rhs, detail::Vec2{amps0.alpha, amps0.beta}, 0.0, t, cfg.step, steps);
  return {end.x, end.y * std::polar(1.0, wr * t)};
}

/// RK4 on i d/dt psi = H(t) psi in the lab basis, starting at time t0.
inline LabSpinor propagate_lab(const DriveParams& params, const LabSpinor& psi0, double t,
                               const IntegratorConfig& cfg = {}, double t0 = 0.0) {
  if (!(std::abs(psi0.norm_sq() - 1.0) <= kNormTolerance)) {
    throw InvalidParameter("propagate_lab: spinor must be normalized");
  }
  const std::size_t steps = plan_steps(params, t, cfg);
  const double half_delta = 0.5 * params.delta;
  const double half_rabi = 0.5 * params.omega_rabi;
  const complex minus_i(0.0, -1.0);

  const auto rhs = [&](double time, const detail::Vec2& v) -> detail::Vec2 {
    const complex off = half_rabi * std::polar(1.0, -params.omega_rot * time);
    return {minus_i * (half_delta * v.x + off * v.y), minus_i * (std::conj(off) * v.x - half_delta * v.y)};
  };
  const detail::Vec2 end = rk4_integrate(rhs, detail::Vec2{psi0.c0, psi0.c1}, t0, t, cfg.step, steps);
  return {end.x, end.y};
}

inline Amplitudes to_eigenbasis(const DriveParams& params, double t, const LabSpinor& psi) {
  const InstantaneousBasis b = eigenstates(params, t);
  return {inner(b.excited, psi), inner(b.ground, psi)};
}

inline LabSpinor from_eigenbasis(const DriveParams& params, double t, const Amplitudes& amps) {
  const InstantaneousBasis b = eigenstates(params, t);
  return {amps.alpha * b.excited.c0 + amps.beta * b.ground.c0, amps.alpha * b.excited.c1 + amps.beta * b.ground.c1};
}

}  // namespace geophase
