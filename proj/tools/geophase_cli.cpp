// geophase: command-line front end for the spin-echo geometric phase library.
//
// Exit status: 0 success, 1 argument/config error, 2 validation failure,
// 3 runtime (integration) error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geophase/geophase.hpp"

namespace {

using namespace geophase;

enum ExitCode : int { kOk = 0, kArgumentError = 1, kValidationFailure = 2, kRuntimeError = 3 };

struct Options {
  double delta = 50.0;
  double omega_rabi = 50.0;
  std::optional<double> omega_rot;
  double loops = 1.0;
  std::string propagator = "exact";
  double step = 1e-3;
  std::size_t max_steps = 50'000'000;
  std::size_t points = 101;
  double theta_min = 0.01;
  double theta_max = 0.99;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::size_t count = 100;
  double threshold = 10.0;
  std::optional<double> cadence;
  std::vector<double> loop_counts{1.0, 2.0, 3.0, 4.0};
  std::string out;
};

double rotation_rate(const Options& o) { return o.omega_rot.value_or(loop_rotation_rate(o.loops)); }

DriveParams drive(const Options& o) { return {o.delta, o.omega_rabi, rotation_rate(o)}; }

IntegratorConfig integrator(const Options& o) { return {.step = o.step, .max_steps = o.max_steps}; }

EchoConfig echo_config(const Options& o) {
  return {.params = drive(o), .loops = o.loops, .propagator = parse_propagator(o.propagator), .integrator = integrator(o)};
}

SweepSpec sweep_spec(const Options& o) {
  SweepSpec s;
  s.delta = o.delta;
  s.omega_rot = rotation_rate(o);
  s.loops = o.loops;
  s.points = o.points;
  s.solid_min_fraction = o.theta_min;
  s.solid_max_fraction = o.theta_max;
  s.propagator = parse_propagator(o.propagator);
  s.integrator = integrator(o);
  return s;
}

/// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidParameter("cannot open output file '" + o.out + "'");
  f << text;
}

void print_kv(std::ostream& os, const std::string& key, double value) {
  os << key << " = " << format_number(value) << '\n';
}

int cmd_eigenframe(const Options& o) {
  const DriveParams p = drive(o);
  const EigenFrame f = eigenframe(p);
  const AdiabaticMargins m = check_adiabatic(f, p.omega_rot, o.threshold);
  std::ostringstream os;
  print_kv(os, "omega", f.omega);
  print_kv(os, "theta", f.theta);
  print_kv(os, "lambda", f.lambda);
  print_kv(os, "big_omega", f.big_omega);
  print_kv(os, "omega_plus", f.omega_plus);
  print_kv(os, "omega_minus", f.omega_minus);
  print_kv(os, "sigma_plus", f.sigma_plus);
  print_kv(os, "sigma_minus", f.sigma_minus);
  print_kv(os, "solid_angle", solid_angle(f.theta));
  print_kv(os, "adiabatic_ratio1", m.ratio1);
  print_kv(os, "adiabatic_ratio2", m.ratio2);
  os << "adiabatic_passed = " << (m.passed ? "true" : "false") << '\n';
  emit(o, os.str());
  return kOk;
}

int cmd_echo(const Options& o) {
  const EchoConfig cfg = echo_config(o);
  const EchoResult r = run_echo(cfg);
  std::ostringstream os;
  print_kv(os, "round_duration", round_duration(cfg.params.omega_rot, cfg.loops));
  print_kv(os, "phi_b", r.phi_b);
  print_kv(os, "phi_na", r.phi_na);
  print_kv(os, "delta_phi", r.delta_phi);
  print_kv(os, "delta_phi_2nd", delta_phi_second_order(cfg.params, cfg.loops));
  print_kv(os, "norm_error", r.norm_error);
  emit(o, os.str());
  return kOk;
}

int cmd_perturb(const Options& o) {
  const SecondOrderTerms s = second_order_terms(drive(o), o.loops);
  std::ostringstream os;
  print_kv(os, "lambda", s.lambda);
  print_kv(os, "phi_b", s.phi_b);
  for (std::size_t j = 0; j < s.phases.size(); ++j) print_kv(os, "phi_prime_" + std::to_string(j + 1), s.phases[j]);
  print_kv(os, "delta_phi_2nd", s.delta_phi());
  emit(o, os.str());
  return kOk;
}

int cmd_sweep(const Options& o) {
  const SweepSummary s = sweep_theta(sweep_spec(o));
  std::ostringstream os;
  write_csv(os, s.rows);
  emit(o, os.str());
  std::cerr << "rms_exact = " << format_number(s.rms_exact) << "\nrms_2nd = " << format_number(s.rms_2nd)
            << "\nmax_abs_delta_phi = " << format_number(s.max_abs_delta_phi) << '\n';
  return kOk;
}

int cmd_sweep_loops(const Options& o) {
  const std::vector<SweepSummary> all = sweep_loops(sweep_spec(o), o.loop_counts);
  std::ostringstream os;
  os << "loops,omega_rot,rms_exact_rad,rms_2nd_rad,max_abs_delta_phi_rad\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double n = o.loop_counts[i];
    os << format_number(n) << ',' << format_number(loop_rotation_rate(n)) << ',' << format_number(all[i].rms_exact)
       << ',' << format_number(all[i].rms_2nd) << ',' << format_number(all[i].max_abs_delta_phi) << '\n';
  }
  emit(o, os.str());
  return kOk;
}

int cmd_validate(const Options& o) {
  const ValidationReport rep = validate_propagators(o.count, o.seed, o.tol);
  emit(o, rep.text);
  return rep.passed ? kOk : kValidationFailure;
}

int cmd_trace(const Options& o) {
  const EchoConfig cfg = echo_config(o);
  const double cadence = o.cadence.value_or(round_duration(cfg.params.omega_rot, cfg.loops) / 500.0);
  std::ostringstream os;
  write_trace_csv(os, trace_echo(cfg, cadence));
  emit(o, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-echo geometric phase of a two-level system in a rotating field"};
  app.set_config("--config", "", "Key/value config file (keys are the long flag names); flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--delta", o.delta, "Static splitting Delta")->capture_default_str();
  app.add_option("--omega-rabi", o.omega_rabi, "Drive amplitude Omega_R")->capture_default_str();
  app.add_option("--omega-rot", o.omega_rot, "Signed rotation rate; default 4n+1");
  app.add_option("--loops", o.loops, "Loops n per round")->capture_default_str();
  app.add_option("--propagator", o.propagator, "Propagator")
      ->check(CLI::IsMember({"exact", "ode", "adiabatic", "lab"}))
      ->capture_default_str();
  app.add_option("--step", o.step, "RK4 step for the ode and lab propagators")->capture_default_str();
  app.add_option("--max-steps", o.max_steps, "RK4 step budget")->capture_default_str();
  app.add_option("--points", o.points, "Solid-angle grid points")->capture_default_str();
  app.add_option("--theta-min", o.theta_min, "Lower solid-angle bound as a fraction of 2 pi")->capture_default_str();
  app.add_option("--theta-max", o.theta_max, "Upper solid-angle bound as a fraction of 2 pi")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for validate")->capture_default_str();
  app.add_option("--tol", o.tol, "Tolerance for validate")->capture_default_str();
  app.add_option("--count", o.count, "Random configurations for validate")->capture_default_str();
  app.add_option("--threshold", o.threshold, "Adiabaticity ratio threshold")->capture_default_str();
  app.add_option("--cadence", o.cadence, "Trace sampling interval; default T/500");
  app.add_option("--loop-counts", o.loop_counts, "Loop counts for sweep-loops")->delimiter(',')->capture_default_str();
  app.add_option("--out", o.out, "Output path; stdout when omitted");

  int (*action)(const Options&) = nullptr;
  const auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->callback([&action, fn] { action = fn; });
  };
  add("eigenframe", "Spectral quantities and adiabaticity margins", cmd_eigenframe);
  add("echo", "One spin-echo run", cmd_echo);
  add("perturb", "Second-order junction phases and deviation", cmd_perturb);
  add("sweep", "Solid-angle sweep as CSV", cmd_sweep);
  add("sweep-loops", "RMS summary for several loop counts (omega_rot = 4n+1)", cmd_sweep_loops);
  add("validate", "Seeded cross-check of exact, RK4 and lab-frame propagation", cmd_validate);
  add("trace", "Populations and relative phase along one echo run", cmd_trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kArgumentError;
  }

  try {
    return action(o);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
