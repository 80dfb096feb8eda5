#pragma once

#include "lieswarm/deformation.hpp"
#include "lieswarm/so3.hpp"

namespace lieswarm {

/// Planar circle the swarm is controlled on, plus the phase-dependent
/// rotation that lifts it into a 3D closed curve around `center`.
struct EmbeddingConfig {
  double r_d = 1.0;       // m
  double omega_zd = 1.0;  // rad/s
  Vec3 center;            // m; center.z is the flight height h
  DeformationSpec deformation;

  /// Throws ScenarioError if r_d <= 0 or a value is non-finite.
  void validate() const;
};

/// (r cos phi, r sin phi, 0)
Vec3 circle_point(double phi, double r);

/// exp of (omega_x(phi), omega_y(phi), 0)^. Propagates EvaluationError.
Rotation deform_rotation(double phi, const DeformationSpec& d);

/// Embedding coordinates -> world: center + R(phi) x_hat.
Vec3 to_world(const Vec3& x_hat, double phi, const EmbeddingConfig& cfg);

/// World -> embedding coordinates: R(phi)^T (x - center).
Vec3 to_embedding(const Vec3& x, double phi, const EmbeddingConfig& cfg);

/// atan2(x_hat.y, x_hat.x) in (-pi, pi]. Throws DegeneratePhase when the
/// point lies on the embedding axis (|x|, |y| both below 1e-12).
double phase_of(const Vec3& x_hat);

/// Point of the reference curve at phase phi: to_world(circle_point(phi, r_d), phi).
Vec3 curve_point(double phi, const EmbeddingConfig& cfg);

}  // namespace lieswarm
