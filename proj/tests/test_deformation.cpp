#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "lieswarm/deformation.hpp"
#include "lieswarm/errors.hpp"

using namespace lieswarm;
using std::numbers::pi;

TEST_CASE("preset table") {
  struct Row {
    const char* name;
    const char* wx;
    const char* wy;
    double s;
    double omega;
  };
  const Row rows[] = {
      {"fig1a", "s*sin(6*phi)*cos(6*phi)", "s", 0.3, 0.8},
      {"fig1b", "s*sin(phi)*cos(phi)", "0", 1.0, 2.0},
      {"fig1c", "s*cos(2*phi)", "s*cos(phi)^2", 0.6, 0.5},
      {"fig1d", "s*cos(3*phi)*sin(phi)", "0.5*s", 0.9, 1.8},
      {"eq23", "s*(cos(phi)*sin(phi) - sin(phi)^3)", "s*cos(phi)^2*sin(-phi)", 0.4, 1.5},
  };
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const ShapePreset p = preset(r.name);
    CHECK(p.name == r.name);
    CHECK(p.deformation.omega_x.source() == r.wx);
    CHECK(p.deformation.omega_y.source() == r.wy);
    CHECK(p.deformation.s == r.s);
    CHECK(p.omega_zd == r.omega);
    CHECK_FALSE(p.description.empty());
  }
  CHECK(shape_presets().size() == 5);
}

TEST_CASE("fig1c evaluates to its caption functions") {
  const auto d = preset("fig1c").deformation;
  for (double phi = -3.1; phi < 3.1; phi += 0.1) {
    const Vec3 w = d.algebra_at(phi);
    CHECK(w.x == doctest::Approx(0.6 * std::cos(2 * phi)).epsilon(1e-14));
    CHECK(w.y == doctest::Approx(0.6 * std::cos(phi) * std::cos(phi)).epsilon(1e-14));
    CHECK(w.z == 0.0);
  }
}

TEST_CASE("unknown preset") {
  try {
    (void)preset("circle");
    FAIL("expected UnknownPreset");
  } catch (const UnknownPreset& e) {
    CHECK(std::string(e.what()).find("circle") != std::string::npos);
  }
}

TEST_CASE("all presets are finite on a dense grid") {
  for (const auto& p : shape_presets()) CHECK_NOTHROW(validate_deformation(p.deformation, 4096));
}

TEST_CASE("validation catches singular expressions") {
  CHECK_THROWS_AS(validate_deformation(DeformationSpec::from_text("1/sin(phi)", "0", 1.0)),
                  EvaluationError);
}
