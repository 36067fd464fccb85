#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "geophase/exact_solver.hpp"
#include "geophase/ode_oracle.hpp"
#include "test_support.hpp"

using namespace geophase;
using Catch::Matchers::WithinAbs;

TEST_CASE("eigenbasis RK4", "[ode]") {
  testing::Draw draw(404);
  const Amplitudes a0 = draw.amplitudes();

  SECTION("t = 0 returns the input") {
    CHECK(testing::deviation(propagate_ode({2.0, 1.0, 0.5}, a0, 0.0), a0) == 0.0);
  }
  SECTION("static field, known phases") {
    const DriveParams p{3.0, 4.0, 0.0};
    const double t = 3.3;
    const Amplitudes a = propagate_ode(p, a0, t, {.step = 1e-3});
    CHECK(std::abs(a.alpha - a0.alpha * std::polar(1.0, -2.5 * t)) <= 1e-10);
    CHECK(std::abs(a.beta - a0.beta * std::polar(1.0, 2.5 * t)) <= 1e-10);
  }
  SECTION("partial final step lands on t") {
    const DriveParams p{1.0, 1.0, 0.7};
    const double t = 1.00037;
    const Amplitudes a = propagate_ode(p, a0, t, {.step = 1e-3});
    CHECK(testing::deviation(a, propagate_exact(p, a0, t)) <= 1e-12);
  }
  SECTION("resolution guard and step budget") {
    const DriveParams p{50.0, 50.0, 5.0};
    CHECK_THROWS_AS(propagate_ode(p, a0, 1.0, {.step = 0.01}), StepTooLarge);
    CHECK_THROWS_AS(propagate_ode(p, a0, 1.0, {.step = 1e-4, .max_steps = 100}), StepBudgetExceeded);
    CHECK_THROWS_AS(propagate_ode(p, a0, 1.0, {.step = 0.0}), InvalidParameter);
    CHECK_NOTHROW(propagate_ode(p, a0, 1.0, {.step = 1e-4, .max_steps = 10000}));
  }
}

TEST_CASE("RK4 converges at fourth order", "[ode][property]") {
  testing::Draw draw(16);
  for (int i = 0; i < 10; ++i) {
    const DriveParams p = draw.sweep_domain_params();
    const Amplitudes a0 = draw.amplitudes();
    const double rate = fastest_rate(p);
    const double t = 40.0 / rate;
    const double h = 0.05 / rate;
    const Amplitudes exact = propagate_exact(p, a0, t);
    const double coarse = testing::deviation(propagate_ode(p, a0, t, {.step = h}), exact);
    const double fine = testing::deviation(propagate_ode(p, a0, t, {.step = h / 2}), exact);
    const double order = std::log2(coarse / fine);
    INFO(describe(p) << " coarse=" << coarse << " fine=" << fine);
    REQUIRE(order >= 3.5);
    REQUIRE(order <= 4.5);
  }
}

TEST_CASE("lab-frame RK4", "[ode]") {
  SECTION("static field on |0>") {
    const DriveParams p{2.0, 0.0, 1.3};
    const double t = 4.0;
    const LabSpinor psi = propagate_lab(p, {complex(1.0), complex(0.0)}, t, {.step = 1e-3});
    CHECK(std::abs(psi.c0 - std::polar(1.0, -1.0 * t)) <= 1e-11);
    CHECK(std::abs(psi.c1) == 0.0);
  }
  SECTION("t = 0") {
    const LabSpinor psi0{complex(0.6), complex(0.0, 0.8)};
    const LabSpinor psi = propagate_lab({1.0, 1.0, 1.0}, psi0, 0.0);
    CHECK(psi.c0 == psi0.c0);
    CHECK(psi.c1 == psi0.c1);
  }
  SECTION("unnormalized input") {
    CHECK_THROWS_AS(propagate_lab({1.0, 1.0, 1.0}, {complex(1.0), complex(1.0)}, 1.0), InvalidParameter);
  }
  SECTION("projected onto the eigenbasis it matches the amplitude oracle") {
    testing::Draw draw(31);
    for (int i = 0; i < 30; ++i) {
      const DriveParams p = draw.sweep_domain_params();
      const Amplitudes a0 = draw.amplitudes();
      const double t = draw.uniform(0.0, 30.0 / eigenframe(p).omega);
      const IntegratorConfig cfg{.step = 0.004 / fastest_rate(p)};
      const LabSpinor psi = propagate_lab(p, from_eigenbasis(p, 0.0, a0), t, cfg);
      REQUIRE(testing::deviation(to_eigenbasis(p, t, psi), propagate_ode(p, a0, t, cfg)) <= 1e-6);
    }
  }
  SECTION("norm drift over two rounds of four loops") {
    testing::Draw draw(32);
    for (int i = 0; i < 5; ++i) {
      const DriveParams p{50.0, draw.uniform(5.0, 200.0), draw.uniform(3.0, 17.0)};
      const double t = 2.0 * 2.0 * std::numbers::pi * 4.0 / p.omega_rot;
      const IntegratorConfig cfg{.step = 0.01 / fastest_rate(p)};
      const LabSpinor psi = propagate_lab(p, {complex(1.0), complex(0.0)}, t, cfg);
      REQUIRE_THAT(psi.norm_sq(), WithinAbs(1.0, 1e-8));
      const Amplitudes a = propagate_ode(p, Amplitudes::equal_superposition(), t, cfg);
      REQUIRE_THAT(a.norm_sq(), WithinAbs(1.0, 1e-8));
    }
  }
}

TEST_CASE("basis conversion", "[ode]") {
  SECTION("eigenstates map to unit amplitudes") {
    const DriveParams p{1.0, 2.0, 0.4};
    const double t = 0.77;
    const InstantaneousBasis b = eigenstates(p, t);
    CHECK(testing::deviation(to_eigenbasis(p, t, b.excited), {complex(1.0), complex(0.0)}) <= 1e-15);
    CHECK(testing::deviation(to_eigenbasis(p, t, b.ground), {complex(0.0), complex(1.0)}) <= 1e-15);
  }
  SECTION("undriven basis at t = 0") {
    const DriveParams p{1.0, 0.0, 0.4};
    const LabSpinor e = from_eigenbasis(p, 0.0, {complex(1.0), complex(0.0)});
    const LabSpinor g = from_eigenbasis(p, 0.0, {complex(0.0), complex(1.0)});
    CHECK(e.c0 == complex(1.0));
    CHECK(std::abs(e.c1) == 0.0);
    CHECK(std::abs(g.c0) == 0.0);
    CHECK(g.c1 == complex(-1.0));
  }
  SECTION("round trip") {
    testing::Draw draw(77);
    for (int i = 0; i < 200; ++i) {
      const DriveParams p = draw.params();
      const double t = draw.uniform(-10.0, 10.0);
      const Amplitudes a = draw.amplitudes();
      const Amplitudes back = to_eigenbasis(p, t, from_eigenbasis(p, t, a));
      REQUIRE(testing::deviation(back, a) <= 1e-12);
      REQUIRE_THAT(from_eigenbasis(p, t, a).norm_sq(), WithinAbs(1.0, 1e-9));
    }
  }
}
