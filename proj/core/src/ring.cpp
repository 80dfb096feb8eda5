#include "lieswarm/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "lieswarm/errors.hpp"
#include "lieswarm/phase_control.hpp"

namespace lieswarm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Counter-clockwise angle from a to b in [0, 2*pi).
double ccw_gap(double a, double b) {
  double d = std::fmod(b - a, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

std::unordered_map<AgentId, double> phase_map(std::span<const IdPhase> phases) {
  std::unordered_map<AgentId, double> m;
  m.reserve(phases.size());
  for (const auto& p : phases) m[p.id] = p.phi;
  return m;
}

}  // namespace

Ring Ring::assign(std::span<const IdPhase> phases) {
  std::vector<IdPhase> sorted(phases.begin(), phases.end());
  for (auto& p : sorted) p.phi = wrap_to_pi(p.phi);
  std::sort(sorted.begin(), sorted.end(), [](const IdPhase& a, const IdPhase& b) {
    return a.phi != b.phi ? a.phi < b.phi : a.id < b.id;
  });
  Ring r;
  r.order_.reserve(sorted.size());
  for (const auto& p : sorted) r.order_.push_back(p.id);
  return r;
}

bool Ring::contains(AgentId id) const {
  return std::find(order_.begin(), order_.end(), id) != order_.end();
}

std::size_t Ring::rank_of(AgentId id) const {
  const auto it = std::find(order_.begin(), order_.end(), id);
  if (it == order_.end()) throw Error("agent " + std::to_string(id) + " is not in the ring");
  return static_cast<std::size_t>(it - order_.begin());
}

AgentId Ring::lead(AgentId id) const { return order_[(rank_of(id) + 1) % order_.size()]; }

AgentId Ring::lag(AgentId id) const {
  return order_[(rank_of(id) + order_.size() - 1) % order_.size()];
}

void Ring::insert(AgentId id, double phi, std::span<const IdPhase> phases) {
  if (contains(id)) throw Error("agent " + std::to_string(id) + " is already in the ring");
  if (order_.empty()) {
    order_.push_back(id);
    return;
  }
  const auto current = phase_map(phases);
  // Closest agent behind phi; equal phases put the lower id behind.
  std::size_t best = 0;
  double best_gap = kTwoPi + 1.0;
  for (std::size_t r = 0; r < order_.size(); ++r) {
    const auto it = current.find(order_[r]);
    if (it == current.end()) throw Error("missing phase for agent " + std::to_string(order_[r]));
    double gap = ccw_gap(it->second, phi);
    if (gap == 0.0 && order_[r] > id) gap = kTwoPi;
    if (gap < best_gap) {
      best_gap = gap;
      best = r;
    }
  }
  order_.insert(order_.begin() + static_cast<std::ptrdiff_t>(best + 1), id);
}

void Ring::remove(AgentId id) { order_.erase(order_.begin() + rank_of(id)); }

std::vector<AgentId> Ring::overtakes(std::span<const IdPhase> phases) const {
  std::vector<AgentId> out;
  if (order_.size() < 3) return out;
  // The ring is in order exactly when its lead links match those of a fresh
  // phase sort; any mismatch means someone passed a neighbor.
  const Ring sorted = assign(phases);
  for (AgentId id : order_) {
    if (sorted.lead(id) != lead(id)) out.push_back(id);
  }
  return out;
}

bool Ring::is_single_cycle() const {
  if (order_.empty()) return true;
  std::unordered_set<AgentId> seen;
  AgentId cur = order_.front();
  for (std::size_t step = 0; step < order_.size(); ++step) {
    if (!seen.insert(cur).second) return false;
    cur = lead(cur);
  }
  return cur == order_.front() && seen.size() == order_.size();
}

}  // namespace lieswarm
