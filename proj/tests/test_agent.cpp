#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lieswarm/agent.hpp"
#include "lieswarm/errors.hpp"

using namespace lieswarm;
using std::numbers::pi;

namespace {

ControlConfig flat_config(double r_d, double h, double omega) {
  ControlConfig c;
  c.embedding.r_d = r_d;
  c.embedding.omega_zd = omega;
  c.embedding.center = {0, 0, h};
  c.embedding.deformation = preset("eq23").deformation;
  c.embedding.deformation.s = 0.0;
  c.phase.omega_zd = omega;
  c.phase.k_phi = 0.02;
  return c;
}

}  // namespace

TEST_CASE("noise-free measurement is exact") {
  SensorModel sensor(0.0, 1, 1);
  const AgentState s{{1.5, -2.0, 3.25}, {}};
  for (int i = 0; i < 10; ++i) CHECK(measure(s, sensor) == s.x);
}

TEST_CASE("noise statistics") {
  SensorModel sensor(0.03, 99, 4);
  const int n = 100000;
  double sum[3] = {}, sq[3] = {};
  for (int i = 0; i < n; ++i) {
    const Vec3 d = sensor.draw();
    const double v[3] = {d.x, d.y, d.z};
    for (int a = 0; a < 3; ++a) {
      sum[a] += v[a];
      sq[a] += v[a] * v[a];
    }
  }
  for (int a = 0; a < 3; ++a) {
    const double mean = sum[a] / n;
    const double sd = std::sqrt(sq[a] / n - mean * mean);
    CHECK(sd >= 0.029);
    CHECK(sd <= 0.031);
  }
}

TEST_CASE("noise streams replay and stay independent") {
  SensorModel a(0.03, 7, 3), b(0.03, 7, 3), other(0.03, 7, 4), reseeded(0.03, 8, 3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = a.draw();
    CHECK(x == b.draw());
    CHECK_FALSE(x == other.draw());
    CHECK_FALSE(x == reseeded.draw());
  }
  CHECK_THROWS_AS(SensorModel(-1.0, 1, 1), ScenarioError);
}

TEST_CASE("step_plant") {
  const AgentState rest{{1, 2, 3}, {}};
  const AgentState same = step_plant(rest, {}, 0.1);
  CHECK(same.x == rest.x);
  CHECK(same.v == rest.v);
  const AgentState one = step_plant({{}, {}}, {1, 0, 0}, 0.1);
  CHECK(one.v.x == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(one.x.x == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("constant acceleration against the analytic solution") {
  const Vec3 u{0.5, -1.0, 2.0};
  const double dt = 0.01;
  AgentState s{{}, {}};
  for (int k = 1; k <= 1000; ++k) {
    s = step_plant(s, u, dt);
    const double t = k * dt;
    const Vec3 exact = u * (0.5 * t * t);
    // Semi-implicit Euler overshoots by u*dt*t/2.
    CHECK((s.x - exact).norm() <= 0.5 * u.norm() * dt * t + 1e-9);
    CHECK((s.v - u * t).norm() < 1e-9);
  }
}

TEST_CASE("agent on the reference with uniform neighbors") {
  const ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  const double phi = 0.3;
  const Vec3 x = curve_point(phi, cfg.embedding);
  AgentRuntime rt;
  rt.id = 1;
  rt.phi = phi;
  const double gap = 2 * pi / 3;
  const TickResult r =
      agent_tick(rt, x, {wrap_to_pi(phi + gap), wrap_to_pi(phi - gap)}, cfg);
  CHECK(r.omega == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.phi_broadcast == doctest::Approx(phi).epsilon(1e-14));
  CHECK((r.target - curve_point(phi + 0.15, cfg.embedding)).norm() < 1e-9);
  CHECK(r.flags == kFlagNone);
  CHECK(r.next.phi == doctest::Approx(phi + 0.15).epsilon(1e-12));
}

TEST_CASE("first tick from outside the circle pulls inward") {
  ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  const Vec3 x{11.0, 0.0, 10.0};
  AgentRuntime rt;
  rt.phi = 0.0;
  const double gap = 2 * pi / 3;
  const TickResult r = agent_tick(rt, x, {gap, -gap}, cfg);
  const Vec3 expected_target{10 * std::cos(0.15), 10 * std::sin(0.15), 10.0};
  CHECK((r.target - expected_target).norm() < 1e-12);
  const Vec3 e = expected_target - x;
  CHECK((r.u - e * cfg.position.k_x).norm() < 1e-12);
  CHECK(r.u.x < 0.0);
  CHECK(r.u.norm() == doctest::Approx(cfg.position.k_x * e.norm()));
}

TEST_CASE("derivative term uses the previous error") {
  ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  AgentRuntime rt;
  rt.phi = 0.0;
  const NeighborPhases nb{2 * pi / 3, -2 * pi / 3};
  const TickResult first = agent_tick(rt, {11, 0, 10}, nb, cfg);
  const TickResult second = agent_tick(first.next, {10.8, 0.5, 10}, nb, cfg);
  const Vec3 e2 = second.target - Vec3{10.8, 0.5, 10};
  const Vec3 e1 = first.target - Vec3{11, 0, 10};
  CHECK((second.u - pd_accel(e2, e1, cfg.dt, cfg.position)).norm() < 1e-12);

  cfg.derivative = DerivativeMode::PlantVelocity;
  const Vec3 v{0.2, 1.0, 0.0};
  const TickResult pv = agent_tick(first.next, {10.8, 0.5, 10}, nb, cfg, v);
  const Vec3 rate = (pv.target - first.target) / cfg.dt;
  CHECK((pv.u - (cfg.position.k_x * e2 + cfg.position.k_v * (rate - v))).norm() < 1e-12);
}

TEST_CASE("degenerate phase holds the previous target") {
  const ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  AgentRuntime rt;
  rt.phi = 0.2;
  const NeighborPhases nb{2.0, -2.0};
  const TickResult ok = agent_tick(rt, {10, 1, 10}, nb, cfg);
  const TickResult held = agent_tick(ok.next, {0, 0, 12}, nb, cfg);
  CHECK((held.flags & kFlagDegeneratePhase) != 0);
  CHECK(held.target == ok.target);
  CHECK(held.phi_broadcast == ok.phi_broadcast);
  CHECK(held.omega == 1.5);
  CHECK(held.u.finite());
}

TEST_CASE("coincident neighbor falls back to the nominal rate") {
  const ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  AgentRuntime rt;
  rt.phi = 0.0;
  const TickResult r = agent_tick(rt, {10, 0, 10}, {0.0, -1.0}, cfg);
  CHECK((r.flags & kFlagCoincidentPhase) != 0);
  CHECK(r.omega == 1.5);
}

TEST_CASE("phase sensing iterations converge on the deformed curve") {
  ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  cfg.embedding.deformation.s = 0.4;
  for (double phi = -3.0; phi < 3.1; phi += 0.2) {
    const Vec3 x = curve_point(phi, cfg.embedding);
    CHECK(sense_phase(x, phi, cfg.embedding, 1).phi == doctest::Approx(phi).epsilon(1e-12));
    CHECK(std::abs(wrap_to_pi(initial_phase(x, cfg.embedding) - phi)) < 1e-9);
  }
}

TEST_CASE("control config validation") {
  ControlConfig cfg = flat_config(10.0, 10.0, 1.5);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.dt = 0.1;
  cfg.phase_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
}
