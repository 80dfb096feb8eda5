#include "lieswarm/reference.hpp"

#include <cmath>

#include "lieswarm/errors.hpp"
#include "lieswarm/phase_control.hpp"

namespace lieswarm {

void PositionGains::validate() const {
  if (!(k_x > 0.0)) throw ScenarioError("gains.k_x must be > 0");
  if (!(k_v > 0.0)) throw ScenarioError("gains.k_v must be > 0");
}

Vec3 desired_on_circle(double phi, double r_d) { return circle_point(phi, r_d); }

double advance_phase(double phi, double omega_zdi, double dt, double r_d) {
  const Vec3 next = apply(exp_so3({0.0, 0.0, omega_zdi * dt}), desired_on_circle(phi, r_d));
  return wrap_to_pi(std::atan2(next.y, next.x));
}

Target next_target(double phi, double omega_zdi, const EmbeddingConfig& cfg, double dt) {
  const double phi_next = advance_phase(phi, omega_zdi, dt, cfg.r_d);
  return {to_world(desired_on_circle(phi_next, cfg.r_d), phi_next, cfg), phi_next};
}

Vec3 pd_accel(const Vec3& e_x, const Vec3& e_x_prev, double dt, const PositionGains& g) {
  return g.k_x * e_x + g.k_v * ((e_x - e_x_prev) / dt);
}

}  // namespace lieswarm
