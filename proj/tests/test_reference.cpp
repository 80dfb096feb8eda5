#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lieswarm/errors.hpp"
#include "lieswarm/phase_control.hpp"
#include "lieswarm/reference.hpp"

using namespace lieswarm;
using std::numbers::pi;

namespace {

EmbeddingConfig eq23(double r_d, double h) {
  EmbeddingConfig c;
  c.r_d = r_d;
  c.center = {0, 0, h};
  c.deformation = preset("eq23").deformation;
  return c;
}

}  // namespace

TEST_CASE("desired_on_circle") {
  CHECK(desired_on_circle(0.0, 10.0) == Vec3{10, 0, 0});
  CHECK((desired_on_circle(pi, 1.0) - Vec3{-1, 0, 0}).norm() < 1e-15);
  CHECK((desired_on_circle(pi / 4, std::sqrt(2.0)) - Vec3{1, 1, 0}).norm() < 1e-12);
}

TEST_CASE("advance_phase") {
  CHECK(advance_phase(0.0, 1.5, 0.1, 10.0) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(std::abs(advance_phase(pi - 0.05, 1.0, 0.1, 1.0) - (-pi + 0.05)) < 1e-12);
  CHECK(advance_phase(0.7, 0.0, 0.1, 3.0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("phase advances by exactly omega*dt") {
  double phi = -3.0;
  double unwrapped = phi;
  for (int k = 0; k < 1000; ++k) {
    const double next = advance_phase(phi, 1.5, 0.1, 10.0);
    const double step = wrap_to_pi(next - phi);
    CHECK(step == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(step > 0.0);
    unwrapped += step;
    phi = next;
  }
  CHECK(unwrapped == doctest::Approx(-3.0 + 150.0).epsilon(1e-12));
}

TEST_CASE("next_target on the flat circle") {
  EmbeddingConfig c = eq23(10.0, 10.0);
  c.deformation.s = 0.0;
  const Target t = next_target(0.0, 1.5, c, 0.1);
  CHECK(t.phi_next == doctest::Approx(0.15));
  CHECK((t.position - Vec3{10 * std::cos(0.15), 10 * std::sin(0.15), 10}).norm() < 1e-12);
  const Target a = next_target(0.4, 0.0, c, 0.1);
  const Target b = next_target(a.phi_next, 0.0, c, 0.1);
  CHECK((a.position - b.position).norm() < 1e-14);
}

TEST_CASE("targets lie on the deformed curve") {
  const EmbeddingConfig c = eq23(10.0, 10.0);
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-pi, pi), w(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Target t = next_target(u(rng), w(rng), c, 0.1);
    const Vec3 xh = to_embedding(t.position, t.phi_next, c);
    CHECK(std::abs(std::hypot(xh.x, xh.y) - 10.0) < 1e-9);
    CHECK(std::abs(xh.z) < 1e-9);
    CHECK((t.position - curve_point(t.phi_next, c)).norm() < 1e-12);
  }
}

TEST_CASE("one lap of targets traces the closed curve") {
  const EmbeddingConfig c = eq23(10.0, 10.0);
  double phi = 0.0;
  const int steps = 200;
  const double omega = 2 * pi / (steps * 0.1);
  Vec3 first;
  for (int k = 0; k < steps; ++k) {
    const Target t = next_target(phi, omega, c, 0.1);
    if (k == 0) first = t.position;
    CHECK((t.position - to_world(circle_point(t.phi_next, 10.0), t.phi_next, c)).norm() < 1e-12);
    phi = t.phi_next;
  }
  CHECK((next_target(phi, omega, c, 0.1).position - first).norm() < 1e-9);
}

TEST_CASE("pd_accel") {
  const PositionGains g{6.0, 6.5 * std::sqrt(2.0)};
  CHECK(pd_accel({1, 0, 0}, {1, 0, 0}, 0.1, g) == Vec3{6, 0, 0});
  CHECK(pd_accel({}, {}, 0.1, g) == Vec3{});
  const Vec3 u = pd_accel({0, 1, 0}, {0, 0.9, 0}, 0.1, g);
  CHECK(u.x == 0.0);
  CHECK(u.y == doctest::Approx(15.192388155425117).epsilon(1e-12));
  CHECK(u.z == 0.0);
  CHECK_THROWS_AS((PositionGains{0.0, 1.0}.validate()), ScenarioError);
}
