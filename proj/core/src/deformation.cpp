#include "lieswarm/deformation.hpp"

#include <numbers>

#include "lieswarm/errors.hpp"

namespace lieswarm {

DeformationSpec DeformationSpec::from_text(std::string_view omega_x, std::string_view omega_y,
                                           double s) {
  return DeformationSpec{Expr::parse(omega_x), Expr::parse(omega_y), s};
}

Vec3 DeformationSpec::algebra_at(double phi) const {
  return {omega_x.eval(phi, s), omega_y.eval(phi, s), 0.0};
}

namespace {

struct PresetText {
  const char* name;
  const char* description;
  const char* omega_x;
  const char* omega_y;
  double s;
  double omega_zd;
};

// Built-in shape library. omega_zd is the rate each shape is usually flown at.
constexpr PresetText kPresets[] = {
    {"fig1a", "12-lobe wobble about X on a constant tilt about Y", "s*sin(6*phi)*cos(6*phi)", "s", 0.3, 0.8},
    {"fig1b", "dumbbell projection in the YZ plane", "s*sin(phi)*cos(phi)", "0", 1.0, 2.0},
    {"fig1c", "double-frequency roll with a cos^2 pitch", "s*cos(2*phi)", "s*cos(phi)^2", 0.6, 0.5},
    {"fig1d", "cos(3 phi) roll on a constant pitch", "s*cos(3*phi)*sin(phi)", "0.5*s", 0.9, 1.8},
    {"eq23", "shape flown in the 50-agent and insertion scenarios",
     "s*(cos(phi)*sin(phi) - sin(phi)^3)", "s*cos(phi)^2*sin(-phi)", 0.4, 1.5},
};

ShapePreset build(const PresetText& p) {
  return ShapePreset{p.name, p.description, DeformationSpec::from_text(p.omega_x, p.omega_y, p.s),
                     p.omega_zd};
}

}  // namespace

ShapePreset preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return build(p);
  }
  throw UnknownPreset(std::string(name));
}

std::vector<ShapePreset> shape_presets() {
  std::vector<ShapePreset> out;
  for (const auto& p : kPresets) out.push_back(build(p));
  return out;
}

void validate_deformation(const DeformationSpec& spec, int samples) {
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / samples;
    (void)spec.algebra_at(phi);
  }
}

}  // namespace lieswarm
