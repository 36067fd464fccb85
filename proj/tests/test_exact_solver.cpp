#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "geophase/exact_solver.hpp"
#include "geophase/ode_oracle.hpp"
#include "test_support.hpp"

using namespace geophase;
using Catch::Matchers::WithinAbs;

namespace {

const Amplitudes kEqual = Amplitudes::equal_superposition();

}  // namespace

TEST_CASE("mode coefficients", "[exact]") {
  SECTION("decoupled limit") {
    const DriveParams p{50.0, 30.0, 0.0};
    const ModeCoefficients c = mode_coefficients(eigenframe(p), 0.0, {complex(1.0), complex(0.0)});
    CHECK(std::abs(c.a1) <= 1e-15);
    CHECK(std::abs(c.a2 - 1.0) <= 1e-15);
    CHECK(std::abs(c.b1) <= 1e-15);
    CHECK(std::abs(c.b2) <= 1e-15);
  }
  SECTION("weights sum to the initial amplitudes") {
    testing::Draw draw(11);
    for (int i = 0; i < 500; ++i) {
      const DriveParams p = draw.params(10.0, 10.0, 20.0);
      const Amplitudes a0 = draw.amplitudes();
      const EigenFrame f = eigenframe(p);
      const ModeCoefficients c = mode_coefficients(f, p.omega_rot, a0);
      const double tol = 1e-12 * std::max(1.0, (f.omega + std::abs(p.omega_rot)) / f.big_omega);
      REQUIRE(std::abs(c.a1 + c.a2 - a0.alpha) <= tol);
      REQUIRE(std::abs(c.b1 + c.b2 - a0.beta) <= tol);
    }
  }
  SECTION("matches a linear solve of the t = 0 mode decomposition") {
    // Frozen from numpy: eigenvectors V of the coefficient matrix, c = solve(V, x0),
    // A1 = V[0,+] c+, A2 = V[0,-] c-, B1 = V[1,+] c+, B2 = V[1,-] c-.
    const DriveParams p{50.0, 50.0, 5.0};
    const ModeCoefficients c = mode_coefficients(eigenframe(p), 5.0, kEqual);
    CHECK_THAT(c.a1.real(), WithinAbs(0.019071024782048914, 1e-14));
    CHECK_THAT(c.a2.real(), WithinAbs(0.6880357564044985, 1e-14));
    CHECK_THAT(c.b1.real(), WithinAbs(0.7252004637168568, 1e-14));
    CHECK_THAT(c.b2.real(), WithinAbs(-0.018093682530309393, 1e-14));
    CHECK(std::abs(c.a1.imag()) + std::abs(c.a2.imag()) + std::abs(c.b1.imag()) + std::abs(c.b2.imag()) == 0.0);
  }
  SECTION("degenerate Omega") {
    const DriveParams p{2.0, 0.0, 2.0};
    CHECK(eigenframe(p).big_omega == 0.0);
    CHECK_THROWS_AS(mode_coefficients(eigenframe(p), 2.0, kEqual), DegenerateMode);
    CHECK_THROWS_AS(propagate_exact(p, kEqual, 1.0), DegenerateMode);
  }
}

TEST_CASE("exact propagation, closed-form cases", "[exact]") {
  const DriveParams p{50.0, 50.0, 5.0};
  SECTION("t = 0 is the identity") {
    CHECK(testing::deviation(propagate_exact(p, kEqual, 0.0), kEqual) <= 1e-15);
  }
  SECTION("static field gives pure dynamical phases") {
    const DriveParams still{3.0, 4.0, 0.0};
    testing::Draw draw(3);
    const Amplitudes a0 = draw.amplitudes();
    const double t = 2.7;
    const Amplitudes a = propagate_exact(still, a0, t);
    CHECK(std::abs(a.alpha - a0.alpha * std::polar(1.0, -2.5 * t)) <= 1e-14);
    CHECK(std::abs(a.beta - a0.beta * std::polar(1.0, 2.5 * t)) <= 1e-14);
  }
  SECTION("agrees with RK4 at h = 1e-4 over one drive period") {
    const double t = 2.0 * std::numbers::pi / 5.0;
    const Amplitudes exact = propagate_exact(p, kEqual, t);
    const Amplitudes ode = propagate_ode(p, kEqual, t, {.step = 1e-4});
    CHECK(testing::deviation(exact, ode) <= 1e-8);
  }
  SECTION("argument errors") {
    CHECK_THROWS_AS(propagate_exact(p, kEqual, -1.0), InvalidParameter);
    CHECK_THROWS_AS(propagate_exact(p, {complex(1.0), complex(1.0)}, 1.0), InvalidParameter);
  }
}

TEST_CASE("adiabatic propagation", "[exact]") {
  testing::Draw draw(5);
  SECTION("t = 0 is the identity") {
    const Amplitudes a0 = draw.amplitudes();
    CHECK(testing::deviation(propagate_adiabatic({1.0, 2.0, 0.3}, a0, 0.0), a0) == 0.0);
  }
  SECTION("coincides with the exact solution when the field does not rotate") {
    for (int i = 0; i < 50; ++i) {
      DriveParams p = draw.params();
      p.omega_rot = 0.0;
      const Amplitudes a0 = draw.amplitudes();
      const double t = draw.uniform(0.0, 50.0);
      REQUIRE(testing::deviation(propagate_adiabatic(p, a0, t), propagate_exact(p, a0, t)) <= 1e-15);
    }
  }
  SECTION("norms of both amplitudes are preserved") {
    for (int i = 0; i < 1000; ++i) {
      const DriveParams p = draw.params();
      const Amplitudes a0 = draw.amplitudes();
      const Amplitudes a = propagate_adiabatic(p, a0, draw.uniform(0.0, 100.0));
      REQUIRE_THAT(std::abs(a.alpha), WithinAbs(std::abs(a0.alpha), 4e-16));
      REQUIRE_THAT(std::abs(a.beta), WithinAbs(std::abs(a0.beta), 4e-16));
    }
  }
}

TEST_CASE("exact propagation properties", "[exact][property]") {
  testing::Draw draw(2718);

  SECTION("unitarity") {
    for (int i = 0; i < 1000; ++i) {
      const DriveParams p = draw.sweep_domain_params();
      const Amplitudes a0 = draw.amplitudes();
      const Amplitudes a = propagate_exact(p, a0, draw.uniform(0.0, 100.0));
      REQUIRE_THAT(a.norm_sq(), WithinAbs(a0.norm_sq(), 1e-12));
    }
  }

  SECTION("semigroup in the rotating gauge") {
    for (int i = 0; i < 200; ++i) {
      const DriveParams p = draw.params();
      const Amplitudes a0 = draw.amplitudes();
      const double t1 = draw.uniform(0.0, 5.0);
      const double t2 = draw.uniform(0.0, 5.0);
      const Amplitudes first = propagate_exact(p, a0, t1);
      const Amplitudes second = from_rotating_gauge(
          propagate_exact(p, to_rotating_gauge(first, p.omega_rot, t1), t2), p.omega_rot, t1);
      REQUIRE(testing::deviation(second, propagate_exact(p, a0, t1 + t2)) <= 1e-10);
    }
  }

  SECTION("initial derivative satisfies the amplitude equations") {
    for (int i = 0; i < 200; ++i) {
      const DriveParams p = draw.params();
      const Amplitudes a0 = draw.amplitudes();
      const EigenFrame f = eigenframe(p);
      const ModeCoefficients c = mode_coefficients(f, p.omega_rot, a0);
      const complex I(0.0, 1.0);
      const double sh = std::sin(f.theta / 2.0);
      const double ch = std::cos(f.theta / 2.0);
      const double k = p.omega_rot / 2.0 * std::sin(f.theta);
      const complex d_alpha = I * (f.omega_plus * c.a1 + f.omega_minus * c.a2);
      const complex d_beta = I * (f.omega_plus * c.b1 + f.omega_minus * c.b2);
      const complex rhs_alpha = -I * (f.omega / 2.0 + p.omega_rot * sh * sh) * a0.alpha + I * a0.beta * k;
      const complex rhs_beta = I * (f.omega / 2.0 - p.omega_rot * ch * ch) * a0.beta + I * a0.alpha * k;
      REQUIRE(std::abs(d_alpha - rhs_alpha) <= 1e-10);
      REQUIRE(std::abs(d_beta - rhs_beta) <= 1e-10);
    }
  }

  SECTION("agrees with RK4 across the sweep domain") {
    for (int i = 0; i < 100; ++i) {
      const DriveParams p = draw.sweep_domain_params();
      const Amplitudes a0 = draw.amplitudes();
      const double omega = eigenframe(p).omega;
      const double t = draw.uniform(0.0, 20.0 * 2.0 * std::numbers::pi / omega);
      const IntegratorConfig cfg{.step = 0.003 / fastest_rate(p)};
      INFO(describe(p) << " t=" << t);
      REQUIRE(testing::deviation(propagate_exact(p, a0, t), propagate_ode(p, a0, t, cfg)) <= 1e-8);
    }
  }

  SECTION("rotation exchanges population between eigenstates") {
    for (int i = 0; i < 50; ++i) {
      DriveParams p = draw.sweep_domain_params();
      if (p.omega_rot == 0.0) continue;
      const double period = 2.0 * std::numbers::pi / eigenframe(p).big_omega;
      double max_change = 0.0;
      for (int k = 1; k <= 64; ++k) {
        const Amplitudes a = propagate_exact(p, kEqual, period * k / 64.0);
        max_change = std::max(max_change, std::abs(std::abs(a.alpha) - std::abs(kEqual.alpha)));
      }
      INFO(describe(p));
      REQUIRE(max_change > 1e-8);
    }
  }

  SECTION("reversed rotation is the same machinery with omega_rot negated") {
    for (int i = 0; i < 100; ++i) {
      const DriveParams p = draw.sweep_domain_params();
      const Amplitudes a0 = draw.amplitudes();
      const double t = draw.uniform(0.0, 3.0);
      const IntegratorConfig cfg{.step = 0.003 / fastest_rate(p.reversed())};
      REQUIRE(testing::deviation(propagate_exact(p.reversed(), a0, t), propagate_ode(p.reversed(), a0, t, cfg)) <=
              1e-8);
    }
  }
}
