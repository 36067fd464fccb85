#pragma once

// Second-order (in lambda = omega_rot sin(theta) / (2 omega)) fluctuation of
// the echo phase for the initial state alpha = beta = 1/sqrt(2):
//
//   delta_phi = lambda^2 * sum_j c_j sin(phi'_j - phi_b)
//
// The twelve phases are kept in their unsimplified published form, pi
// offsets included, so each line can be diffed against the source formula.

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "geophase/core_model.hpp"
#include "geophase/echo_protocol.hpp"

namespace geophase {

struct SecondOrderTerms {
  static constexpr std::array<int, 12> weights{1, 4, 2, 2, 2, 1, 2, 1, 2, 2, 4, 4};

  std::array<double, 12> phases{};  // phi'_1 .. phi'_12
  double lambda = 0.0;
  double phi_b = 0.0;

  /// lambda^2 * sum_j c_j sin(phi'_j - phi_b)
  [[nodiscard]] double delta_phi() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < phases.size(); ++j) sum += weights[j] * std::sin(phases[j] - phi_b);
    return lambda * lambda * sum;
  }
};

static_assert(std::accumulate(SecondOrderTerms::weights.begin(), SecondOrderTerms::weights.end(), 0) == 27);

/// Terms for an explicit round duration T, decoupled from the loop convention.
inline SecondOrderTerms second_order_terms_for_duration(const DriveParams& params, double T) {
  const EigenFrame frame = eigenframe(params);
  const double w = frame.omega;
  const double wr = params.omega_rot;
  const double c = std::cos(frame.theta);
  const double c2 = std::cos(2.0 * frame.theta);
  const double pi = std::numbers::pi;

  SecondOrderTerms s;
  s.lambda = frame.lambda;
  s.phi_b = 2.0 * wr * T * (1.0 - c);
  auto& p = s.phases;
  p[0] = pi - 2.0 * T * wr * c;
  p[1] = -T * wr;
  p[2] = T * wr * (-1.0 + 2.0 * c);
  p[3] = -T * (wr * wr + 8.0 * wr * w + 4.0 * w * w - 4.0 * wr * w * c - wr * wr * c2) / (4.0 * w);
  p[4] = pi + T * (-(wr + 2.0 * w) * (wr + 2.0 * w) + 4.0 * wr * w * c + wr * wr * c2) / (4.0 * w);
  p[5] = pi + T * ((wr - 2.0 * w) * (wr - 2.0 * w) - wr * wr * c2) / (2.0 * w);
  p[6] = T * (wr * wr - 2.0 * wr * w + 4.0 * w * w - wr * wr * c2) / (2.0 * w);
  p[7] = pi + T * (wr * wr + 4.0 * w * w - wr * wr * c2) / (2.0 * w);
  p[8] = pi + T * ((wr - 2.0 * w) * (wr - 2.0 * w) - 4.0 * wr * w * c - wr * wr * c2) / (4.0 * w);
  p[9] = T * (wr * wr + 4.0 * w * w - 4.0 * wr * w * c - wr * wr * c2) / (4.0 * w);
  p[10] = T * (wr * wr - 8.0 * wr * w + 4.0 * w * w + 4.0 * wr * w * c - wr * wr * c2) / (4.0 * w);
  p[11] = pi + T * ((wr - 2.0 * w) * (wr - 2.0 * w) + 4.0 * wr * w * c - wr * wr * c2) / (4.0 * w);
  return s;
}

inline SecondOrderTerms second_order_terms(const DriveParams& params, double loops) {
  SecondOrderTerms s = second_order_terms_for_duration(params, round_duration(params.omega_rot, loops));
  s.phi_b = berry_phase(EchoConfig{.params = params, .loops = loops});
  return s;
}

inline double delta_phi_second_order(const DriveParams& params, double loops) {
  return second_order_terms(params, loops).delta_phi();
}

}  // namespace geophase
