#include "lieswarm/phase_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lieswarm/errors.hpp"
#include "lieswarm/so3.hpp"

namespace lieswarm {

void PhaseGains::validate() const {
  if (!(k_phi > 0.0)) throw ScenarioError("gains.k_phi must be > 0");
  if (!(eps_clamp > 0.0)) throw ScenarioError("phase eps_clamp must be > 0");
  if (!(cap_factor > 0.0)) throw ScenarioError("phase cap_factor must be > 0");
  if (!std::isfinite(omega_zd)) throw ScenarioError("omega_zd must be finite");
}

double wrap_to_pi(double theta) {
  if (theta > -std::numbers::pi && theta <= std::numbers::pi) return theta;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

namespace {

double clamp_gap(double gap, double eps, bool& clamped) {
  if (gap == 0.0) throw CoincidentPhase("neighbor phases coincide");
  if (std::abs(gap) < eps) {
    clamped = true;
    return std::copysign(eps, gap);
  }
  return gap;
}

}  // namespace

PhaseRate phase_rate_detailed(const PhaseView& view, const PhaseGains& g) {
  PhaseRate out;
  const double e_ki = clamp_gap(wrap_to_pi(view.phi_i - view.phi_k), g.eps_clamp, out.clamped);
  const double e_ji = clamp_gap(wrap_to_pi(view.phi_i - view.phi_j), g.eps_clamp, out.clamped);
  const double raw = g.omega_zd + g.k_phi * (1.0 / e_ki + 1.0 / e_ji);
  const double cap = g.cap_factor * std::abs(g.omega_zd);
  out.omega = std::clamp(raw, g.omega_zd - cap, g.omega_zd + cap);
  out.saturated = out.omega != raw;
  return out;
}

double lyapunov_value(std::span<const PhaseErrors> errors) {
  double v = 0.0;
  for (const auto& e : errors) {
    if (e.e_ji == 0.0 || e.e_ki == 0.0) throw CoincidentPhase("zero phase gap in Lyapunov sum");
    const double term = 1.0 / e.e_ji + 1.0 / e.e_ki;
    v += 0.5 * term * term;
  }
  return v;
}

std::vector<PhaseErrors> ring_errors(std::span<const double> ring_phases) {
  const std::size_t n = ring_phases.size();
  std::vector<PhaseErrors> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lead = ring_phases[(i + 1) % n];
    const double lag = ring_phases[(i + n - 1) % n];
    out[i] = {wrap_to_pi(ring_phases[i] - lag), wrap_to_pi(ring_phases[i] - lead)};
  }
  return out;
}

std::vector<double> kinematic_round(std::span<const double> ring_phases, const PhaseGains& g,
                                    double dt) {
  const std::size_t n = ring_phases.size();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PhaseView view{ring_phases[i], ring_phases[(i + 1) % n], ring_phases[(i + n - 1) % n]};
    const double omega = phase_rate(view, g);
    const Vec3 p = apply(exp_so3({0.0, 0.0, omega * dt}),
                         {std::cos(ring_phases[i]), std::sin(ring_phases[i]), 0.0});
    next[i] = wrap_to_pi(std::atan2(p.y, p.x));
  }
  return next;
}

}  // namespace lieswarm
