#pragma once

#include <span>
#include <vector>

namespace lieswarm {

/// An agent's own phase and those of its leading (k) and lagging (j)
/// neighbors, all in (-pi, pi].
struct PhaseView {
  double phi_i = 0.0;
  double phi_k = 0.0;
  double phi_j = 0.0;
};

struct PhaseGains {
  double k_phi = 0.02;      // rad^2/s
  double omega_zd = 1.5;    // rad/s
  double eps_clamp = 1e-3;  // rad; smallest phase gap used in the inverse
  double cap_factor = 10.0; // output limited to omega_zd +- cap_factor*|omega_zd|

  /// Throws ScenarioError on non-positive k_phi, eps_clamp or cap_factor.
  void validate() const;
};

/// Maps theta onto (-pi, pi].
double wrap_to_pi(double theta);

struct PhaseRate {
  double omega = 0.0;      // commanded omega_{z,d,i}, rad/s
  bool clamped = false;    // a neighbor gap was below eps_clamp
  bool saturated = false;  // output hit the +-cap band
};

/// Inverse-gap repulsion law:
///   omega_i = omega_zd + k_phi * (1/wrap(phi_i - phi_k) + 1/wrap(phi_i - phi_j))
/// Gaps smaller than eps_clamp are replaced by +-eps_clamp before inversion
/// and the result is saturated. Throws CoincidentPhase for an exactly zero gap.
PhaseRate phase_rate_detailed(const PhaseView& view, const PhaseGains& g);

inline double phase_rate(const PhaseView& view, const PhaseGains& g) {
  return phase_rate_detailed(view, g).omega;
}

/// Gaps of one agent to its lagging (e_ji = phi_i - phi_j) and leading
/// (e_ki = phi_i - phi_k) neighbors, wrapped to (-pi, pi].
struct PhaseErrors {
  double e_ji = 0.0;
  double e_ki = 0.0;
};

/// sum_i 0.5 * (1/e_ji + 1/e_ki)^2. Throws CoincidentPhase if any gap is 0.
double lyapunov_value(std::span<const PhaseErrors> errors);

/// Gap pairs for phases listed in ring order, where element i+1 (mod n)
/// leads element i.
std::vector<PhaseErrors> ring_errors(std::span<const double> ring_phases);

/// One synchronous round of the virtual (embedding-only) swarm: every
/// agent reads the same snapshot, computes its phase rate and advances its
/// phase with the z-axis exponential map. Phases are in ring order.
std::vector<double> kinematic_round(std::span<const double> ring_phases, const PhaseGains& g,
                                    double dt);

}  // namespace lieswarm
