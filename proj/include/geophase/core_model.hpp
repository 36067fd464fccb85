#pragma once

// Two-level system in a field rotating about z at rate omega_rot:
//
//   H(t) = 1/2 (delta sz + omega_rabi (sx cos(omega_rot t) + sy sin(omega_rot t)))
//
// All frequencies are angular frequencies in reciprocal time units.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "geophase/errors.hpp"

namespace geophase {

using complex = std::complex<double>;

/// 2x2 complex matrix, row major.
using Matrix2 = std::array<std::array<complex, 2>, 2>;

struct DriveParams {
  double delta = 1.0;       // static splitting, > 0
  double omega_rabi = 0.0;  // drive amplitude, >= 0
  double omega_rot = 0.0;   // signed rotation rate

  /// Same drive rotating the other way.
  [[nodiscard]] DriveParams reversed() const { return {delta, omega_rabi, -omega_rot}; }
};

inline std::string describe(const DriveParams& p) {
  std::ostringstream os;
  os.precision(12);
  os << "(delta=" << p.delta << ", omega_rabi=" << p.omega_rabi << ", omega_rot=" << p.omega_rot << ")";
  return os.str();
}

inline void validate(const DriveParams& p) {
  if (!std::isfinite(p.delta) || !std::isfinite(p.omega_rabi) || !std::isfinite(p.omega_rot)) {
    throw InvalidParameter("drive parameters must be finite " + describe(p));
  }
  if (p.delta <= 0.0) {
    throw InvalidParameter("delta must be positive " + describe(p));
  }
  if (p.omega_rabi < 0.0) {
    throw InvalidParameter("omega_rabi must be non-negative " + describe(p));
  }
}

/// Spectral data of one drive configuration.
struct EigenFrame {
  double omega;        // sqrt(delta^2 + omega_rabi^2)
  double theta;        // mixing angle, [0, pi/2)
  double lambda;       // omega_rot sin(theta) / (2 omega); signed with omega_rot
  double big_omega;    // sqrt(omega^2 - 2 omega omega_rot cos(theta) + omega_rot^2)
  double omega_plus;   // (-omega_rot + big_omega) / 2
  double omega_minus;  // (-omega_rot - big_omega) / 2
  double sigma_plus;   // omega_rot (1 + cos(theta)) + 2 omega_plus
  double sigma_minus;  // omega_rot (1 - cos(theta)) + 2 omega_plus
};

inline EigenFrame eigenframe(const DriveParams& p) {
  validate(p);
  const double wr = p.omega_rot;
  EigenFrame f{};
  f.omega = std::hypot(p.delta, p.omega_rabi);
  f.theta = std::atan2(p.omega_rabi, p.delta);
  const double c = std::cos(f.theta);
  f.lambda = wr * std::sin(f.theta) / (2.0 * f.omega);
  // Clamp: rounding can push the radicand a hair below zero at the
  // degenerate point omega_rot == omega, theta == 0.
  f.big_omega = std::sqrt(std::max(0.0, f.omega * f.omega - 2.0 * f.omega * wr * c + wr * wr));
  f.omega_plus = (-wr + f.big_omega) / 2.0;
  f.omega_minus = (-wr - f.big_omega) / 2.0;
  f.sigma_plus = wr * (1.0 + c) + 2.0 * f.omega_plus;
  f.sigma_minus = wr * (1.0 - c) + 2.0 * f.omega_plus;
  return f;
}

inline Matrix2 hamiltonian(const DriveParams& p, double t) {
  validate(p);
  if (!std::isfinite(t)) throw InvalidParameter("time must be finite");
  const complex off = 0.5 * p.omega_rabi * std::polar(1.0, -p.omega_rot * t);
  return Matrix2{{{complex(0.5 * p.delta), off}, {std::conj(off), complex(-0.5 * p.delta)}}};
}

/// Spinor on the lab basis {|0>, |1>}.
struct LabSpinor {
  complex c0;
  complex c1;

  [[nodiscard]] double norm_sq() const { return std::norm(c0) + std::norm(c1); }
};

inline complex inner(const LabSpinor& a, const LabSpinor& b) {
  return std::conj(a.c0) * b.c0 + std::conj(a.c1) * b.c1;
}

inline LabSpinor apply(const Matrix2& m, const LabSpinor& v) {
  return {m[0][0] * v.c0 + m[0][1] * v.c1, m[1][0] * v.c0 + m[1][1] * v.c1};
}

struct InstantaneousBasis {
  LabSpinor excited;  // |e(t)>, energy +omega/2
  LabSpinor ground;   // |g(t)>, energy -omega/2
};

/// Eigenstates with the fixed gauge
///   |e(t)> = cos(theta/2)|0> + sin(theta/2) e^{i omega_rot t}|1>
///   |g(t)> = sin(theta/2) e^{-i omega_rot t}|0> - cos(theta/2)|1>.
/// Every basis conversion in the library goes through this function.
inline InstantaneousBasis eigenstates(const DriveParams& p, double t) {
  validate(p);
  const double theta = std::atan2(p.omega_rabi, p.delta);
  const double ch = std::cos(theta / 2.0);
  const double sh = std::sin(theta / 2.0);
  const complex rot = std::polar(1.0, p.omega_rot * t);
  return {{complex(ch), sh * rot}, {sh * std::conj(rot), complex(-ch)}};
}

inline double solid_angle(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw DomainError("solid_angle: theta must lie in [0, pi/2]");
  }
  return 2.0 * std::numbers::pi * (1.0 - std::cos(theta));
}

/// Both sides of the two adiabaticity conditions
///   omega/2 + omega_rot sin^2(theta/2) >> (omega_rot/2) sin(theta)
///   omega/2 - omega_rot cos^2(theta/2) >> (omega_rot/2) sin(theta)
/// A ratio is lhs/|rhs|, or +inf when rhs vanishes.
struct AdiabaticMargins {
  double lhs1;
  double rhs1;
  double lhs2;
  double rhs2;
  double ratio1;
  double ratio2;
  bool passed;
};

inline AdiabaticMargins check_adiabatic(const EigenFrame& frame, double omega_rot, double threshold = 10.0) {
  if (!(threshold > 1.0)) throw InvalidParameter("adiabatic threshold must exceed 1");
  const double sh = std::sin(frame.theta / 2.0);
  const double ch = std::cos(frame.theta / 2.0);
  AdiabaticMargins m{};
  m.lhs1 = frame.omega / 2.0 + omega_rot * sh * sh;
  m.lhs2 = frame.omega / 2.0 - omega_rot * ch * ch;
  m.rhs1 = m.rhs2 = omega_rot / 2.0 * std::sin(frame.theta);
  const auto ratio = [](double lhs, double rhs) {
    return rhs == 0.0 ? std::numeric_limits<double>::infinity() : lhs / std::abs(rhs);
  };
  m.ratio1 = ratio(m.lhs1, m.rhs1);
  m.ratio2 = ratio(m.lhs2, m.rhs2);
  m.passed = m.ratio1 >= threshold && m.ratio2 >= threshold;
  return m;
}

}  // namespace geophase
