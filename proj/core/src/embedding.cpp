#include "lieswarm/embedding.hpp"

#include <cmath>
#include <numbers>

#include "lieswarm/errors.hpp"

namespace lieswarm {

void EmbeddingConfig::validate() const {
  if (!(r_d > 0.0) || !std::isfinite(r_d)) throw ScenarioError("embedding.r_d must be > 0");
  if (!std::isfinite(omega_zd)) throw ScenarioError("embedding.omega_zd must be finite");
  if (!center.finite()) throw ScenarioError("embedding.center must be finite");
}

Vec3 circle_point(double phi, double r) { return {r * std::cos(phi), r * std::sin(phi), 0.0}; }

Rotation deform_rotation(double phi, const DeformationSpec& d) {
  return exp_so3(d.algebra_at(phi));
}

Vec3 to_world(const Vec3& x_hat, double phi, const EmbeddingConfig& cfg) {
  return cfg.center + apply(deform_rotation(phi, cfg.deformation), x_hat);
}

Vec3 to_embedding(const Vec3& x, double phi, const EmbeddingConfig& cfg) {
  return apply(transpose(deform_rotation(phi, cfg.deformation)), x - cfg.center);
}

double phase_of(const Vec3& x_hat) {
  if (std::abs(x_hat.x) < 1e-12 && std::abs(x_hat.y) < 1e-12) {
    throw DegeneratePhase("point lies on the embedding axis");
  }
  const double phi = std::atan2(x_hat.y, x_hat.x);
  // atan2 may return -pi for (negative, -0.0); fold it onto +pi.
  return phi == -std::numbers::pi ? std::numbers::pi : phi;
}

Vec3 curve_point(double phi, const EmbeddingConfig& cfg) {
  return to_world(circle_point(phi, cfg.r_d), phi, cfg);
}

}  // namespace lieswarm
