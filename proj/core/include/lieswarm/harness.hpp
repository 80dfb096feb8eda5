#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lieswarm/agent.hpp"
#include "lieswarm/ring.hpp"
#include "lieswarm/scenario.hpp"

namespace lieswarm {

/// One agent-tick of simulation output.
struct TelemetryRecord {
  double t = 0.0;  // s
  AgentId id = 0;
  Vec3 x;          // true position at t
  Vec3 x_d;        // reference commanded at t
  double phi = 0;  // broadcast phase
  double omega_zdi = 0;
  std::uint32_t flags = kFlagNone;
};

/// All records of one tick in ascending id order, plus the ring order and the
/// Lyapunov value of the phase snapshot the tick ran on.
struct TickFrame {
  long tick = 0;
  double t = 0.0;
  std::vector<TelemetryRecord> agents;
  std::vector<AgentId> ring;
  double lyapunov = 0.0;  // +inf when two ring neighbors share a phase
};

struct RunResult {
  std::vector<TickFrame> frames;
};

/// Called once per tick as soon as the frame is complete.
using FrameSink = std::function<void(const TickFrame&)>;

struct RunOptions {
  /// Overrides Scenario::threads when > 0.
  int threads = 0;
  /// Keep frames in RunResult; streaming-only callers can turn this off.
  bool keep_frames = true;
};

/// floor(2*pi*r_d / r_a): agents of radius r_a that fit around the circle.
long capacity(double r_d, double r_a);

/// Initial positions and velocities, indexed like agent ids 1..n.
std::vector<AgentState> spawn_agents(const Scenario& sc);

/// Runs a scenario tick by tick. Each tick:
///   1. applies events whose time has come,
///   2. measures every agent and senses its phase,
///   3. checks the ring against the sensed phases (flag, and re-sort under
///      ReassignOnOvertake),
///   4. runs every agent_tick against that one snapshot,
///   5. records telemetry and steps every plant.
/// Throws ScenarioError for an invalid scenario. Per-agent numerical trouble
/// is reported through record flags.
RunResult run(const Scenario& sc, const RunOptions& opts = {}, const FrameSink& sink = {});

}  // namespace lieswarm
