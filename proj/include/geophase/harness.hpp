#pragma once

// Parameter sweeps over the solid angle, loop-count comparisons, seeded
// cross-validation of the propagators, and time traces of one echo run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geophase/core_model.hpp"
#include "geophase/echo_protocol.hpp"
#include "geophase/exact_solver.hpp"
#include "geophase/ode_oracle.hpp"
#include "geophase/perturbation.hpp"

namespace geophase {

/// A failed sweep row or validation run; the message names the parameters.
class RunFailure : public Error {
 public:
  using Error::Error;
};

/// omega_rot = 4n + 1, the loop-count convention used for the reference sweeps.
inline double loop_rotation_rate(double loops) { return 4.0 * loops + 1.0; }

struct SweepSpec {
  double delta = 50.0;
  double omega_rot = 5.0;
  double loops = 1.0;
  std::size_t points = 101;
  // Solid-angle bounds as fractions of 2 pi; [0.01, 0.99] is [0.02 pi, 1.98 pi].
  double solid_min_fraction = 0.01;
  double solid_max_fraction = 0.99;
  Propagator propagator = Propagator::exact;
  IntegratorConfig integrator{};
};

struct SweepRow {
  double theta;
  double solid_angle;
  double omega_rabi;
  double phi_b;
  double phi_na;
  double delta_phi_exact;
  double delta_phi_2nd;
  double norm_error;
  double lambda;  // not written to CSV
};

struct SweepSummary {
  double rms_exact = 0.0;
  double rms_2nd = 0.0;
  double max_abs_delta_phi = 0.0;
  std::vector<SweepRow> rows;
};

inline double rms(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

inline void validate(const SweepSpec& spec) {
  if (spec.points < 2) throw InvalidParameter("sweep needs at least 2 grid points");
  if (!(spec.solid_min_fraction > 0.0 && spec.solid_min_fraction < spec.solid_max_fraction &&
        spec.solid_max_fraction < 1.0)) {
    throw InvalidParameter("solid-angle bounds must satisfy 0 < min < max < 1 (fractions of 2 pi)");
  }
  if (!std::isfinite(spec.loops) || !(spec.loops > 0.0)) throw InvalidParameter("loops must be positive");
  if (!std::isfinite(spec.omega_rot) || spec.omega_rot == 0.0) throw InvalidParameter("omega_rot must be non-zero");
  validate(DriveParams{spec.delta, 0.0, spec.omega_rot});
}

inline SweepSummary sweep_theta(const SweepSpec& spec) {
  validate(spec);
  const double two_pi = 2.0 * std::numbers::pi;
  const double lo = spec.solid_min_fraction * two_pi;
  const double hi = spec.solid_max_fraction * two_pi;

  SweepSummary out;
  out.rows.reserve(spec.points);
  // Both phases vanish at theta = 0; unwrap phi_na by continuity of phi_na - phi_b from there.
  double prev_phi_na = 0.0;
  double prev_phi_b = 0.0;
  for (std::size_t i = 0; i < spec.points; ++i) {
    SweepRow row{};
    row.solid_angle = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(spec.points - 1);
    row.theta = std::acos(1.0 - row.solid_angle / two_pi);
    row.omega_rabi = spec.delta * std::tan(row.theta);
    const DriveParams params{spec.delta, row.omega_rabi, spec.omega_rot};
    try {
      const EchoResult echo =
          run_echo({.params = params, .loops = spec.loops, .propagator = spec.propagator, .integrator = spec.integrator});
      const SecondOrderTerms terms = second_order_terms(params, spec.loops);
      row.phi_b = echo.phi_b;
      row.phi_na = unwrap_near(echo.phi_na, prev_phi_na + (echo.phi_b - prev_phi_b));
      row.delta_phi_exact = row.phi_na - row.phi_b;
      row.delta_phi_2nd = terms.delta_phi();
      row.norm_error = echo.norm_error;
      row.lambda = terms.lambda;
    } catch (const Error& e) {
      std::ostringstream os;
      os.precision(12);
      os << "sweep row " << i << " failed at theta=" << row.theta << " solid_angle=" << row.solid_angle << " loops="
         << spec.loops << " " << describe(params) << ": " << e.what();
      throw RunFailure(os.str());
    }
    prev_phi_na = row.phi_na;
    prev_phi_b = row.phi_b;
    out.rows.push_back(row);
  }

  std::vector<double> exact;
  std::vector<double> second;
  for (const SweepRow& r : out.rows) {
    exact.push_back(r.delta_phi_exact);
    second.push_back(r.delta_phi_2nd);
    out.max_abs_delta_phi = std::max(out.max_abs_delta_phi, std::abs(r.delta_phi_exact));
  }
  out.rms_exact = rms(exact);
  out.rms_2nd = rms(second);
  return out;
}

/// One sweep per loop count with omega_rot = 4n + 1; other fields from `base`.
inline std::vector<SweepSummary> sweep_loops(const SweepSpec& base, const std::vector<double>& loop_counts) {
  std::vector<SweepSummary> out;
  std::string failures;
  for (double n : loop_counts) {
    SweepSpec spec = base;
    spec.loops = n;
    spec.omega_rot = loop_rotation_rate(n);
    try {
      out.push_back(sweep_theta(spec));
    } catch (const Error& e) {
      failures += "n=" + std::to_string(n) + ": " + e.what() + "\n";
    }
  }
  if (!failures.empty()) throw RunFailure("sweep-loops failed:\n" + failures);
  return out;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "theta_rad,solid_angle_rad,omega_rabi,phi_b_rad,phi_na_rad,delta_phi_rad,delta_phi_2nd_rad,norm_error";

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << format_number(r.theta) << ',' << format_number(r.solid_angle) << ',' << format_number(r.omega_rabi) << ','
       << format_number(r.phi_b) << ',' << format_number(r.phi_na) << ',' << format_number(r.delta_phi_exact) << ','
       << format_number(r.delta_phi_2nd) << ',' << format_number(r.norm_error) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Seeded random configurations

/// Uniform doubles in [0, 1) from the top 53 bits of mt19937_64, whose output
/// sequence is fixed by the standard; std::uniform_real_distribution is not.
class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct RandomCase {
  DriveParams params;
  double loops;
  double duration;  // up to 2T
};

/// Reference delta for random draws; only ratios to it matter.
inline constexpr double kRandomCaseDelta = 50.0;

/// theta in [0.05, pi/2 - 0.05], omega_rot/omega in [0, 2], duration uniform in
/// (0, 2T]. T is taken with |omega_rot| floored at omega/20 so that nearly
/// static drives still get a finite window.
inline RandomCase draw_case(UnitSampler& rng, double loops) {
  const double theta = rng.uniform(0.05, std::numbers::pi / 2.0 - 0.05);
  const double ratio = rng.uniform(0.0, 2.0);
  const double fraction = 1.0 - rng();  // (0, 1]
  const double omega = kRandomCaseDelta / std::cos(theta);
  RandomCase c{};
  c.params = {kRandomCaseDelta, kRandomCaseDelta * std::tan(theta), ratio * omega};
  c.loops = loops;
  const double rate = std::max(std::abs(c.params.omega_rot), omega / 20.0);
  c.duration = fraction * 2.0 * round_duration(rate, loops);
  return c;
}

inline RandomCase draw_case(UnitSampler& rng) {
  static constexpr double kLoops[] = {0.5, 1.0, 1.5, 2.0};
  const double loops = kLoops[rng.raw() % 4];
  return draw_case(rng, loops);
}

/// Integrator step with h * fastest_rate = 0.004, well inside the resolution guard.
inline IntegratorConfig validation_integrator(const DriveParams& p) {
  return {.step = 0.004 / fastest_rate(p), .max_steps = 50'000'000};
}

inline double component_deviation(const Amplitudes& a, const Amplitudes& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

struct CaseDeviation {
  double exact_vs_ode = 0.0;
  double exact_vs_lab = 0.0;
  double ode_vs_lab = 0.0;
  double identities = 0.0;  // eigenframe and mode-coefficient residuals, relative
};

inline CaseDeviation compare_propagators(const RandomCase& c) {
  CaseDeviation d;
  const Amplitudes start = Amplitudes::equal_superposition();
  const IntegratorConfig cfg = validation_integrator(c.params);
  const Amplitudes exact = propagate_exact(c.params, start, c.duration);
  const Amplitudes ode = propagate_ode(c.params, start, c.duration, cfg);
  const Amplitudes lab = propagate(Propagator::lab, c.params, start, c.duration, cfg);
  d.exact_vs_ode = component_deviation(exact, ode);
  d.exact_vs_lab = component_deviation(exact, lab);
  d.ode_vs_lab = component_deviation(ode, lab);

  const EigenFrame f = eigenframe(c.params);
  const double wr = c.params.omega_rot;
  const double scale = f.omega + std::abs(wr);
  const double sum_res = std::abs(f.omega_plus + f.omega_minus + wr) / scale;
  const double prod_res =
      std::abs(f.omega_plus * f.omega_minus - (-f.omega * f.omega / 4.0 + f.omega * wr * std::cos(f.theta) / 2.0)) /
      (scale * scale);
  const double sigma_res = std::abs(f.sigma_plus + f.sigma_minus - 2.0 * f.big_omega) / scale;
  const ModeCoefficients m = mode_coefficients(f, wr, start);
  const double mode_res = std::max(std::abs(m.a1 + m.a2 - start.alpha), std::abs(m.b1 + m.b2 - start.beta));
  d.identities = std::max({sum_res, prod_res, sigma_res, mode_res});
  return d;
}

struct ValidationReport {
  std::string text;
  double max_exact_vs_ode = 0.0;
  double max_exact_vs_lab = 0.0;
  double max_ode_vs_lab = 0.0;
  double max_identity = 0.0;
  bool passed = true;
};

inline ValidationReport validate_propagators(std::size_t count, std::uint64_t seed, double tolerance) {
  if (count < 1) throw InvalidParameter("validate: count must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidParameter("validate: tolerance must be positive");
  UnitSampler rng(seed);
  ValidationReport rep;
  std::ostringstream os;
  os << "validate count=" << count << " seed=" << seed << " tol=" << format_number(tolerance) << '\n';
  os << "case,delta,omega_rabi,omega_rot,loops,duration,exact_vs_ode,exact_vs_lab,ode_vs_lab,identities\n";
  char buf[96];
  for (std::size_t i = 0; i < count; ++i) {
    const RandomCase c = draw_case(rng);
    const CaseDeviation d = compare_propagators(c);
    os << i << ',' << format_number(c.params.delta) << ',' << format_number(c.params.omega_rabi) << ','
       << format_number(c.params.omega_rot) << ',' << format_number(c.loops) << ',' << format_number(c.duration);
    std::snprintf(buf, sizeof buf, ",%.3e,%.3e,%.3e,%.3e\n", d.exact_vs_ode, d.exact_vs_lab, d.ode_vs_lab,
                  d.identities);
    os << buf;
    rep.max_exact_vs_ode = std::max(rep.max_exact_vs_ode, d.exact_vs_ode);
    rep.max_exact_vs_lab = std::max(rep.max_exact_vs_lab, d.exact_vs_lab);
    rep.max_ode_vs_lab = std::max(rep.max_ode_vs_lab, d.ode_vs_lab);
    rep.max_identity = std::max(rep.max_identity, d.identities);
  }
  rep.passed = rep.max_exact_vs_ode <= tolerance && rep.max_exact_vs_lab <= tolerance &&
               rep.max_ode_vs_lab <= tolerance && rep.max_identity <= tolerance;
  std::snprintf(buf, sizeof buf, "max exact_vs_ode=%.3e exact_vs_lab=%.3e ode_vs_lab=%.3e identities=%.3e\n",
                rep.max_exact_vs_ode, rep.max_exact_vs_lab, rep.max_ode_vs_lab, rep.max_identity);
  os << buf << "result " << (rep.passed ? "PASS" : "FAIL") << '\n';
  rep.text = os.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Time traces

struct TraceRow {
  double t;
  double pop_excited;  // |alpha|^2
  double pop_ground;   // |beta|^2
  double phase;        // arg(alpha conj(beta)), unwrapped along t
  bool pulse;          // the row at t = T, shown after the pulse
};

inline constexpr const char* kTraceCsvHeader = "t,pop_excited,pop_ground,phase_rad,pulse";

/// Samples one echo run every `cadence` time units over [0, 2T]; T and 2T are
/// always included.
inline std::vector<TraceRow> trace_echo(const EchoConfig& config, double cadence) {
  validate(config.params);
  if (!(cadence > 0.0) || !std::isfinite(cadence)) throw InvalidParameter("trace cadence must be positive");
  const double period = round_duration(config.params.omega_rot, config.loops);
  if (period / cadence > 1e7) throw InvalidParameter("trace cadence too fine for the round duration");

  std::vector<double> times;
  const double eps = 1e-12 * period;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cadence;
    if (t >= period - eps) break;
    times.push_back(t);
  }
  const std::size_t pulse_index = times.size();
  times.push_back(period);
  for (std::size_t k = 1;; ++k) {
    const double t = period + static_cast<double>(k) * cadence;
    if (t >= 2.0 * period - eps) break;
    times.push_back(t);
  }
  times.push_back(2.0 * period);

  std::vector<TraceRow> rows;
  rows.reserve(times.size());
  Amplitudes amps = config.initial;
  double local = 0.0;  // time within the current round
  double prev_phase = 0.0;
  const DriveParams reverse = config.params.reversed();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const bool second_round = i > pulse_index;
    const double round_t = second_round ? times[i] - period : times[i];
    const double dt = round_t - local;
    if (dt > 0.0) {
      amps = advance(config.propagator, second_round ? reverse : config.params, amps, local, dt, config.integrator);
    }
    local = round_t;
    if (i == pulse_index) {
      amps = pi_pulse(amps);
      local = 0.0;
    }
    TraceRow row{};
    row.t = times[i];
    row.pop_excited = std::norm(amps.alpha);
    row.pop_ground = std::norm(amps.beta);
    const double principal = std::arg(amps.alpha * std::conj(amps.beta));
    row.phase = i == 0 ? principal : unwrap_near(principal, prev_phase);
    row.pulse = i == pulse_index;
    prev_phase = row.phase;
    rows.push_back(row);
  }
  return rows;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceCsvHeader << '\n';
  for (const TraceRow& r : rows) {
    os << format_number(r.t) << ',' << format_number(r.pop_excited) << ',' << format_number(r.pop_ground) << ','
       << format_number(r.phase) << ',' << (r.pulse ? 1 : 0) << '\n';
  }
}

}  // namespace geophase
