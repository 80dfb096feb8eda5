#include "lieswarm/agent.hpp"

#include <cmath>

#include "lieswarm/errors.hpp"

namespace lieswarm {

void ControlConfig::validate() const {
  embedding.validate();
  phase.validate();
  position.validate();
  if (!(dt > 0.0)) throw ScenarioError("sim.dt must be > 0");
  if (phase_iterations < 1) throw ScenarioError("phase_iterations must be >= 1");
}

SensorModel::SensorModel(double sigma, std::uint64_t seed, AgentId agent) : sigma_(sigma) {
  if (!(sigma >= 0.0)) throw ScenarioError("noise.sigma must be >= 0");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(agent), 0x5eedu};
  engine_.seed(seq);
}

Vec3 SensorModel::draw() {
  if (sigma_ == 0.0) return {};
  const double nx = normal_(engine_);
  const double ny = normal_(engine_);
  const double nz = normal_(engine_);
  return Vec3{nx, ny, nz} * sigma_;
}

Vec3 measure(const AgentState& state, SensorModel& sensor) { return state.x + sensor.draw(); }

SensedPhase sense_phase(const Vec3& measured, double phi_guess, const EmbeddingConfig& cfg,
                        int iterations) {
  SensedPhase out{{}, phi_guess};
  for (int i = 0; i < iterations; ++i) {
    out.x_hat = to_embedding(measured, out.phi, cfg);
    out.phi = phase_of(out.x_hat);
  }
  return out;
}

double initial_phase(const Vec3& measured, const EmbeddingConfig& cfg, int iterations) {
  const Vec3 rel = measured - cfg.center;
  const double guess = phase_of({rel.x, rel.y, 0.0});
  return sense_phase(measured, guess, cfg, iterations).phi;
}

namespace {

Vec3 control_input(const AgentRuntime& rt, const Vec3& target, const Vec3& measured,
                   const ControlConfig& cfg, const Vec3& plant_velocity, Vec3& error_out) {
  error_out = target - measured;
  if (cfg.derivative == DerivativeMode::PlantVelocity) {
    const Vec3 target_rate =
        rt.has_target ? (target - rt.last_target) / cfg.dt : Vec3{};
    return cfg.position.k_x * error_out + cfg.position.k_v * (target_rate - plant_velocity);
  }
  // First tick has no history: zero derivative.
  const Vec3& prev = rt.has_prev_error ? rt.e_x_prev : error_out;
  return pd_accel(error_out, prev, cfg.dt, cfg.position);
}

}  // namespace

TickResult agent_tick(const AgentRuntime& rt, const Vec3& measured,
                      const NeighborPhases& neighbors, const ControlConfig& cfg,
                      const Vec3& plant_velocity) {
  TickResult out;
  out.next = rt;

  SensedPhase sensed;
  try {
    sensed = sense_phase(measured, rt.phi, cfg.embedding, cfg.phase_iterations);
  } catch (const DegeneratePhase&) {
    out.flags |= kFlagDegeneratePhase;
    out.target = rt.has_target ? rt.last_target : curve_point(rt.phi, cfg.embedding);
    out.omega = cfg.phase.omega_zd;
    out.phi_broadcast = rt.last_broadcast_phi;
    Vec3 e;
    out.u = control_input(rt, out.target, measured, cfg, plant_velocity, e);
    out.next.e_x_prev = e;
    out.next.has_prev_error = true;
    out.next.last_target = out.target;
    out.next.has_target = true;
    return out;
  }

  try {
    const PhaseRate rate =
        phase_rate_detailed({sensed.phi, neighbors.phi_k, neighbors.phi_j}, cfg.phase);
    out.omega = rate.omega;
    if (rate.clamped) out.flags |= kFlagGapClamped;
    if (rate.saturated) out.flags |= kFlagRateSaturated;
  } catch (const CoincidentPhase&) {
    out.omega = cfg.phase.omega_zd;
    out.flags |= kFlagCoincidentPhase;
  }

  const Target tgt = next_target(sensed.phi, out.omega, cfg.embedding, cfg.dt);
  out.target = tgt.position;
  out.phi_broadcast = sensed.phi;

  Vec3 e;
  out.u = control_input(rt, out.target, measured, cfg, plant_velocity, e);

  out.next.phi = tgt.phi_next;
  out.next.e_x_prev = e;
  out.next.has_prev_error = true;
  out.next.last_broadcast_phi = sensed.phi;
  out.next.last_target = out.target;
  out.next.has_target = true;
  return out;
}

AgentState step_plant(const AgentState& state, const Vec3& u, double dt) {
  const Vec3 v = state.v + u * dt;
  return {state.x + v * dt, v};
}

}  // namespace lieswarm
