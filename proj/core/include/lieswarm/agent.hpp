#pragma once

#include <cstdint>
#include <random>

#include "lieswarm/embedding.hpp"
#include "lieswarm/phase_control.hpp"
#include "lieswarm/reference.hpp"
#include "lieswarm/so3.hpp"

namespace lieswarm {

using AgentId = std::int32_t;

/// Plant truth for one double-integrator agent.
struct AgentState {
  Vec3 x;  // m
  Vec3 v;  // m/s
};

/// Bit flags attached to each telemetry record.
enum AgentFlag : std::uint32_t {
  kFlagNone = 0,
  kFlagDegeneratePhase = 1u << 0,  // position on the embedding axis; target held
  kFlagCoincidentPhase = 1u << 1,  // exactly zero neighbor gap; nominal rate used
  kFlagGapClamped = 1u << 2,       // a neighbor gap was clamped to eps
  kFlagRateSaturated = 1u << 3,    // phase rate hit its cap
  kFlagOvertake = 1u << 4,         // ring order violated this tick
  kFlagRingReassigned = 1u << 5,   // lead/lag links changed this tick
  kFlagInserted = 1u << 6,         // agent joined this tick
};

/// How the derivative of the position error is formed.
enum class DerivativeMode {
  /// (e - e_prev)/dt from measured positions only.
  PositionDifference,
  /// (x_d - x_d_prev)/dt - v using the plant's true velocity.
  PlantVelocity,
};

/// Per-agent controller parameters. Shared by every agent of a run.
struct ControlConfig {
  EmbeddingConfig embedding;
  PhaseGains phase;
  PositionGains position;
  double dt = 0.1;  // s
  /// Fixed-point passes phi -> R(phi)^T x -> atan2 when sensing the phase.
  int phase_iterations = 1;
  DerivativeMode derivative = DerivativeMode::PositionDifference;

  void validate() const;
};

/// Controller memory of one agent. Everything an agent knows about the rest
/// of the swarm arrives through the two neighbor phases passed to agent_tick.
struct AgentRuntime {
  AgentId id = 0;
  AgentId lead_id = 0;
  AgentId lag_id = 0;
  double phi = 0.0;  // phase the deformation is evaluated at when sensing
  Vec3 e_x_prev;
  bool has_prev_error = false;
  double last_broadcast_phi = 0.0;
  Vec3 last_target;
  bool has_target = false;
};

/// Seeded white Gaussian position noise, one independent stream per agent.
class SensorModel {
 public:
  SensorModel(double sigma, std::uint64_t seed, AgentId agent);

  /// Next noise vector of this stream; all zeros when sigma == 0.
  Vec3 draw();
  [[nodiscard]] double sigma() const { return sigma_; }

 private:
  double sigma_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// x + n with n ~ N(0, sigma^2 I) drawn from `sensor`.
Vec3 measure(const AgentState& state, SensorModel& sensor);

/// Phase of a measured position: iterate phi <- phase_of(R(phi)^T (x - c))
/// `iterations` times starting from `phi_guess`. Throws DegeneratePhase.
struct SensedPhase {
  Vec3 x_hat;
  double phi = 0.0;
};
SensedPhase sense_phase(const Vec3& measured, double phi_guess, const EmbeddingConfig& cfg,
                        int iterations);

/// Phase for an agent with no history: starts from the planar angle of
/// x - center and refines with `iterations` fixed-point passes.
double initial_phase(const Vec3& measured, const EmbeddingConfig& cfg, int iterations = 16);

struct NeighborPhases {
  double phi_k = 0.0;  // leading neighbor
  double phi_j = 0.0;  // lagging neighbor
};

struct TickResult {
  Vec3 target;               // world-frame reference x_d
  Vec3 u;                    // commanded acceleration
  double phi_broadcast = 0;  // phase published to neighbors
  double omega = 0;          // commanded omega_{z,d,i}
  std::uint32_t flags = kFlagNone;
  AgentRuntime next;
};

/// One control step of one agent:
///   1. sense the phase of `measured` starting from rt.phi,
///   2. phase rate from the sensed phase and the two neighbor phases,
///   3. advance the phase and lift the next circle point into the world,
///   4. PD acceleration towards it.
/// `plant_velocity` is only read in DerivativeMode::PlantVelocity.
/// A degenerate phase holds the previous target and is reported in flags.
TickResult agent_tick(const AgentRuntime& rt, const Vec3& measured,
                      const NeighborPhases& neighbors, const ControlConfig& cfg,
                      const Vec3& plant_velocity = {});

/// Semi-implicit Euler: v' = v + u dt, x' = x + v' dt.
AgentState step_plant(const AgentState& state, const Vec3& u, double dt);

}  // namespace lieswarm
