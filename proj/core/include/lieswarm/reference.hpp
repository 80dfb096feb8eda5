#pragma once

#include "lieswarm/embedding.hpp"
#include "lieswarm/so3.hpp"

namespace lieswarm {

struct PositionGains {
  double k_x = 6.0;                     // 1/s^2
  double k_v = 6.5 * 1.4142135623730951;  // 1/s

  void validate() const;
};

/// Desired embedding position for phase phi: (r_d cos phi, r_d sin phi, 0).
Vec3 desired_on_circle(double phi, double r_d);

/// Rotates desired_on_circle(phi) by exp((0, 0, omega*dt)^) and reads the
/// new phase back with atan2. Result in (-pi, pi].
double advance_phase(double phi, double omega_zdi, double dt, double r_d);

struct Target {
  Vec3 position;        // world frame, m
  double phi_next = 0;  // rad
};

/// Advances the phase and lifts the new circle point into the world with the
/// deformation evaluated at the advanced phase.
Target next_target(double phi, double omega_zdi, const EmbeddingConfig& cfg, double dt);

/// PD acceleration k_x*e + k_v*de/dt, with de/dt taken as the backward
/// difference (e - e_prev)/dt.
Vec3 pd_accel(const Vec3& e_x, const Vec3& e_x_prev, double dt, const PositionGains& g);

}  // namespace lieswarm
