#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lieswarm/agent.hpp"

namespace lieswarm {

struct IdPhase {
  AgentId id = 0;
  double phi = 0.0;
};

/// Directed cycle of agents in ascending phase order. The agent at rank r
/// is led by rank r+1 and lagged by rank r-1 (both mod n).
class Ring {
 public:
  Ring() = default;

  /// Sorts by wrapped phase, ties broken by ascending id.
  static Ring assign(std::span<const IdPhase> phases);

  [[nodiscard]] std::size_t size() const { return order_.size(); }
  [[nodiscard]] const std::vector<AgentId>& order() const { return order_; }
  [[nodiscard]] bool contains(AgentId id) const;

  [[nodiscard]] AgentId lead(AgentId id) const;
  [[nodiscard]] AgentId lag(AgentId id) const;

  /// Splices `id` in front of the agent closest behind `phi`, using the
  /// current phases in `phases`. Only two existing links change.
  void insert(AgentId id, double phi, std::span<const IdPhase> phases);

  /// Removes `id`; its lag and lead become neighbors.
  void remove(AgentId id);

  /// Agents whose lead link differs from the one a fresh phase sort would
  /// give. Always empty for fewer than three agents.
  [[nodiscard]] std::vector<AgentId> overtakes(std::span<const IdPhase> phases) const;

  /// True when following lead links from any agent visits every agent once.
  [[nodiscard]] bool is_single_cycle() const;

 private:
  [[nodiscard]] std::size_t rank_of(AgentId id) const;

  std::vector<AgentId> order_;
};

}  // namespace lieswarm
