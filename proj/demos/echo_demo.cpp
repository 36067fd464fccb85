// Prints the echo phase against the Berry prediction for a few mixing angles,
// using the exact, RK4 and adiabatic propagators side by side.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "geophase/geophase.hpp"

int main() {
  using namespace geophase;
  const double delta = 50.0;
  const double omega_rot = 5.0;

  std::printf("%8s %10s %12s %14s %14s %14s\n", "theta", "lambda", "phi_b", "dphi_exact", "dphi_rk4", "dphi_2nd");
  for (double theta : {0.2, 0.5, std::numbers::pi / 4.0, 1.0, 1.3}) {
    EchoConfig cfg{.params = {delta, delta * std::tan(theta), omega_rot}, .loops = 1.0};
    const EchoResult exact = run_echo(cfg);

    cfg.propagator = Propagator::ode;
    cfg.integrator.step = 0.01 / fastest_rate(cfg.params);
    const EchoResult rk4 = run_echo(cfg);

    std::printf("%8.4f %10.5f %12.6f %14.6e %14.6e %14.6e\n", theta, eigenframe(cfg.params).lambda, exact.phi_b,
                exact.delta_phi, rk4.delta_phi, delta_phi_second_order(cfg.params, cfg.loops));
  }
  return 0;
}
