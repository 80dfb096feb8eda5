#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lieswarm/agent.hpp"

namespace lieswarm {

/// Where and how agents appear at t = 0.
struct SpawnSpec {
  enum class Kind {
    NearCurve,  // curve point plus a random offset of at most max_offset
    OnCurve,    // exactly on the curve
    Box,        // per-axis uniform in [min, max]
    Explicit,   // listed positions
  };
  enum class Phases { Uniform, Random };
  enum class Velocity { Rest, Curve };

  Kind kind = Kind::NearCurve;
  Phases phases = Phases::Random;
  double max_offset = 0.0;   // m, NearCurve
  double jitter = 0.0;       // fraction of the nominal gap, OnCurve/NearCurve with Uniform
  Vec3 box_min, box_max;     // m, Box
  std::vector<Vec3> positions;
  /// Rest: v = 0. Curve: tangent velocity of the reference at omega_zd.
  Velocity velocity = Velocity::Rest;
};

/// Exactly one placement is set.
struct InsertEvent {
  std::optional<Vec3> position;  // world position of the new agent
  std::optional<double> phi;     // or: on the curve at this phase
  bool largest_gap = false;      // or: on the curve, mid-way across the widest phase gap
};

struct RemoveEvent {
  AgentId id = 0;
};

struct TimedEvent {
  double t = 0.0;  // s
  std::variant<InsertEvent, RemoveEvent> action;
};

/// What the harness does when agents pass each other in phase.
enum class RingPolicy {
  Frozen,              // keep t=0 links until an insert/remove event
  ReassignOnOvertake,  // re-sort the ring whenever an overtake is detected
};

struct Scenario {
  std::string name;
  std::string description;
  ControlConfig control;
  std::string deformation_label;  // preset name or "inline"
  int n_agents = 3;
  double sigma = 0.0;  // m
  double duration = 10.0;  // s
  std::uint64_t seed = 1;
  int threads = 1;
  RingPolicy ring_policy = RingPolicy::ReassignOnOvertake;
  SpawnSpec spawn;
  std::vector<TimedEvent> events;
  /// Convergence band for metrics; defaults by swarm size when unset.
  std::optional<double> convergence_band_deg;
  double convergence_hold_s = 2.0;

  /// Throws ScenarioError describing the first violated constraint.
  void validate() const;
  [[nodiscard]] long ticks() const;
};

/// Parses a scenario JSON document. Throws ScenarioError.
Scenario parse_scenario(std::string_view json_text);

/// Reads and parses a scenario file. Throws IoError or ScenarioError.
Scenario load_scenario(const std::filesystem::path& path);

/// A scenario shipped with the library.
struct BundledScenario {
  std::string name;
  std::string description;
  std::string json;
};

std::vector<BundledScenario> bundled_scenarios();
/// Looks a bundled scenario up by name. Throws UnknownPreset.
Scenario bundled_scenario(std::string_view name);

}  // namespace lieswarm
