#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lieswarm/expr.hpp"
#include "lieswarm/so3.hpp"

namespace lieswarm {

/// Parametric angular velocities (omega_x(phi), omega_y(phi)) about the X and
/// Y axes, scaled by the distortion factor s. s = 0 leaves the circle flat
/// whenever every term of both expressions carries a factor of s.
struct DeformationSpec {
  Expr omega_x = Expr::constant(0.0);
  Expr omega_y = Expr::constant(0.0);
  double s = 0.0;

  /// Builds a spec from expression text. Throws SyntaxError / UnknownIdentifier.
  static DeformationSpec from_text(std::string_view omega_x, std::string_view omega_y,
                                   double s);

  /// Lie-algebra vector (omega_x(phi), omega_y(phi), 0).
  [[nodiscard]] Vec3 algebra_at(double phi) const;
};

/// A named shape with the nominal angular rate it was shown with.
struct ShapePreset {
  std::string name;
  std::string description;
  DeformationSpec deformation;
  double omega_zd = 0.0;  // rad/s, metadata only
};

/// Looks up fig1a..fig1d or eq23. Throws UnknownPreset.
ShapePreset preset(std::string_view name);

/// All shape presets, in a stable order.
std::vector<ShapePreset> shape_presets();

/// Evaluates the spec on `samples` phases spread over [0, 2*pi) and throws
/// EvaluationError if any value is non-finite.
void validate_deformation(const DeformationSpec& spec, int samples = 4096);

}  // namespace lieswarm
