#include "lieswarm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "lieswarm/errors.hpp"

namespace lieswarm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Live {
  AgentId id;
  AgentState state;
  AgentRuntime rt;
  SensorModel sensor;
  std::uint32_t pending_flags = kFlagNone;
};

class SpawnRng {
 public:
  explicit SpawnRng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x59a3u};
    engine_.seed(seq);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  Vec3 in_ball(double radius) {
    for (;;) {
      const Vec3 d{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (d.dot(d) <= 1.0) return d * radius;
    }
  }

 private:
  std::mt19937_64 engine_;
};

Vec3 curve_velocity(double phi, const EmbeddingConfig& cfg) {
  constexpr double h = 1e-6;
  return (curve_point(phi + h, cfg) - curve_point(phi - h, cfg)) * (cfg.omega_zd / (2.0 * h));
}

double phase_or_zero(const Vec3& x, const EmbeddingConfig& cfg) {
  try {
    return initial_phase(x, cfg);
  } catch (const DegeneratePhase&) {
    return 0.0;
  }
}

AgentState place(const Vec3& x, std::optional<double> curve_phi, const Scenario& sc) {
  const auto& emb = sc.control.embedding;
  if (sc.spawn.velocity == SpawnSpec::Velocity::Rest) return {x, {}};
  return {x, curve_velocity(curve_phi ? *curve_phi : phase_or_zero(x, emb), emb)};
}

void check_events(const Scenario& sc, const std::vector<TimedEvent>& events) {
  std::set<AgentId> live;
  for (AgentId id = 1; id <= sc.n_agents; ++id) live.insert(id);
  AgentId next = sc.n_agents + 1;
  for (const auto& ev : events) {
    if (std::holds_alternative<InsertEvent>(ev.action)) {
      live.insert(next++);
      continue;
    }
    const AgentId id = std::get<RemoveEvent>(ev.action).id;
    if (!live.erase(id)) {
      throw ScenarioError(fmt::format("event at t={} removes agent {}, which is not live", ev.t, id));
    }
    if (live.size() < 2) {
      throw ScenarioError(fmt::format("event at t={} leaves fewer than two agents", ev.t));
    }
  }
}

double largest_gap_midpoint(const std::vector<Live>& agents) {
  std::vector<double> phis;
  for (const auto& a : agents) phis.push_back(wrap_to_pi(a.rt.last_broadcast_phi));
  std::sort(phis.begin(), phis.end());
  double best_gap = -1.0;
  double best_mid = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double from = phis[i];
    double gap = (i + 1 < phis.size() ? phis[i + 1] : phis[0] + kTwoPi) - from;
    if (phis.size() == 1) gap = kTwoPi;
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = wrap_to_pi(from + 0.5 * gap);
    }
  }
  return best_mid;
}

std::vector<IdPhase> broadcast_phases(const std::vector<Live>& agents) {
  std::vector<IdPhase> out;
  out.reserve(agents.size());
  for (const auto& a : agents) out.push_back({a.id, a.rt.last_broadcast_phi});
  return out;
}

class Simulation {
 public:
  Simulation(const Scenario& sc, int threads) : sc_(sc), threads_(threads) {
    events_ = sc.events;
    std::stable_sort(events_.begin(), events_.end(),
                     [](const TimedEvent& a, const TimedEvent& b) { return a.t < b.t; });
    check_events(sc, events_);

    const auto states = spawn_agents(sc);
    for (std::size_t i = 0; i < states.size(); ++i) {
      add_agent(static_cast<AgentId>(i + 1), states[i]);
    }
    next_id_ = sc.n_agents + 1;
    ring_ = Ring::assign(broadcast_phases(agents_));
    reindex();
  }

  TickFrame step(long k) {
    const auto& cfg = sc_.control;
    const double t = static_cast<double>(k) * cfg.dt;
    while (next_event_ < events_.size() && events_[next_event_].t <= t + 1e-9 * cfg.dt) {
      apply(events_[next_event_++]);
    }

    const std::size_t n = agents_.size();
    std::vector<Vec3> measured(n);
    std::vector<IdPhase> snapshot(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& a = agents_[i];
      measured[i] = measure(a.state, a.sensor);
      double phi = a.rt.last_broadcast_phi;
      try {
        phi = sense_phase(measured[i], a.rt.phi, cfg.embedding, cfg.phase_iterations).phi;
      } catch (const DegeneratePhase&) {
      }
      snapshot[i] = {a.id, phi};
    }

    check_ring(snapshot);

    std::vector<TickResult> results(n);
    run_ticks(measured, snapshot, results);

    TickFrame frame;
    frame.tick = k;
    frame.t = t;
    frame.ring = ring_.order();
    frame.lyapunov = lyapunov(snapshot);
    frame.agents.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& a = agents_[i];
      const auto& r = results[i];
      frame.agents.push_back(
          {t, a.id, a.state.x, r.target, r.phi_broadcast, r.omega, r.flags | a.pending_flags});
      a.pending_flags = kFlagNone;
      a.rt = r.next;
      a.state = step_plant(a.state, r.u, cfg.dt);
    }
    return frame;
  }

 private:
  void add_agent(AgentId id, const AgentState& state) {
    Live a{id, state, {}, SensorModel(sc_.sigma, sc_.seed, id)};
    a.rt.id = id;
    a.rt.phi = phase_or_zero(state.x, sc_.control.embedding);
    a.rt.last_broadcast_phi = a.rt.phi;
    agents_.push_back(std::move(a));
  }

  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < agents_.size(); ++i) index_[agents_[i].id] = i;
    for (auto& a : agents_) {
      a.rt.lead_id = ring_.lead(a.id);
      a.rt.lag_id = ring_.lag(a.id);
    }
  }

  Live& agent(AgentId id) { return agents_[index_.at(id)]; }

  void apply(const TimedEvent& ev) {
    const auto& emb = sc_.control.embedding;
    if (const auto* ins = std::get_if<InsertEvent>(&ev.action)) {
      std::optional<double> curve_phi;
      Vec3 x;
      if (ins->position) {
        x = *ins->position;
      } else {
        curve_phi = ins->phi ? *ins->phi : largest_gap_midpoint(agents_);
        x = curve_point(*curve_phi, emb);
      }
      const auto phases = broadcast_phases(agents_);
      const AgentId id = next_id_++;
      add_agent(id, place(x, curve_phi, sc_));
      ring_.insert(id, agents_.back().rt.phi, phases);
      reindex();
      agent(id).pending_flags |= kFlagInserted;
      agent(ring_.lead(id)).pending_flags |= kFlagRingReassigned;
      agent(ring_.lag(id)).pending_flags |= kFlagRingReassigned;
      return;
    }
    const AgentId id = std::get<RemoveEvent>(ev.action).id;
    const AgentId lead = ring_.lead(id);
    const AgentId lag = ring_.lag(id);
    ring_.remove(id);
    agents_.erase(agents_.begin() + static_cast<std::ptrdiff_t>(index_.at(id)));
    reindex();
    agent(lead).pending_flags |= kFlagRingReassigned;
    agent(lag).pending_flags |= kFlagRingReassigned;
  }

  void check_ring(const std::vector<IdPhase>& snapshot) {
    const auto passed = ring_.overtakes(snapshot);
    if (passed.empty()) return;
    for (AgentId id : passed) agent(id).pending_flags |= kFlagOvertake;
    if (sc_.ring_policy != RingPolicy::ReassignOnOvertake) return;
    ring_ = Ring::assign(snapshot);
    for (auto& a : agents_) {
      if (ring_.lead(a.id) != a.rt.lead_id || ring_.lag(a.id) != a.rt.lag_id) {
        a.pending_flags |= kFlagRingReassigned;
      }
    }
    reindex();
  }

  void run_ticks(const std::vector<Vec3>& measured, const std::vector<IdPhase>& snapshot,
                 std::vector<TickResult>& results) const {
    const auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& a = agents_[i];
        const NeighborPhases nb{snapshot[index_.at(a.rt.lead_id)].phi,
                                snapshot[index_.at(a.rt.lag_id)].phi};
        results[i] = agent_tick(a.rt, measured[i], nb, sc_.control, a.state.v);
      }
    };
    const std::size_t n = agents_.size();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads_), n);
    if (workers <= 1) {
      work(0, n);
      return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            work(n * w / workers, n * (w + 1) / workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  double lyapunov(const std::vector<IdPhase>& snapshot) const {
    std::vector<double> ordered;
    ordered.reserve(snapshot.size());
    for (AgentId id : ring_.order()) ordered.push_back(snapshot[index_.at(id)].phi);
    try {
      return lyapunov_value(ring_errors(ordered));
    } catch (const CoincidentPhase&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  const Scenario& sc_;
  int threads_;
  std::vector<TimedEvent> events_;
  std::size_t next_event_ = 0;
  std::vector<Live> agents_;
  std::unordered_map<AgentId, std::size_t> index_;
  Ring ring_;
  AgentId next_id_ = 1;
};

}  // namespace

long capacity(double r_d, double r_a) {
  if (!(r_d > 0.0) || !(r_a > 0.0)) throw Error("capacity needs r_d > 0 and r_a > 0");
  return static_cast<long>(std::floor(kTwoPi * r_d / r_a));
}

std::vector<AgentState> spawn_agents(const Scenario& sc) {
  const auto& emb = sc.control.embedding;
  const auto& sp = sc.spawn;
  const int n = sc.n_agents;
  SpawnRng rng(sc.seed);
  std::vector<AgentState> out;
  out.reserve(static_cast<std::size_t>(n));

  if (sp.kind == SpawnSpec::Kind::Box || sp.kind == SpawnSpec::Kind::Explicit) {
    for (int i = 0; i < n; ++i) {
      const Vec3 x = sp.kind == SpawnSpec::Kind::Explicit
                         ? sp.positions[static_cast<std::size_t>(i)]
                         : Vec3{rng.uniform(sp.box_min.x, sp.box_max.x),
                                rng.uniform(sp.box_min.y, sp.box_max.y),
                                rng.uniform(sp.box_min.z, sp.box_max.z)};
      out.push_back(place(x, std::nullopt, sc));
    }
    return out;
  }

  const double gap = kTwoPi / n;
  for (int i = 0; i < n; ++i) {
    double phi = 0.0;
    if (sp.phases == SpawnSpec::Phases::Random) {
      phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
    } else {
      const double jitter = sp.jitter > 0.0 ? sp.jitter * rng.uniform(-1.0, 1.0) : 0.0;
      phi = wrap_to_pi(gap * (i + jitter));
    }
    Vec3 x = curve_point(phi, emb);
    if (sp.kind == SpawnSpec::Kind::NearCurve && sp.max_offset > 0.0) {
      x = x + rng.in_ball(sp.max_offset);
    }
    out.push_back(place(x, phi, sc));
  }
  return out;
}

RunResult run(const Scenario& sc, const RunOptions& opts, const FrameSink& sink) {
  sc.validate();
  Simulation sim(sc, opts.threads > 0 ? opts.threads : sc.threads);
  RunResult result;
  const long ticks = sc.ticks();
  if (opts.keep_frames) result.frames.reserve(static_cast<std::size_t>(ticks));
  for (long k = 0; k < ticks; ++k) {
    TickFrame frame = sim.step(k);
    if (sink) sink(frame);
    if (opts.keep_frames) result.frames.push_back(std::move(frame));
  }
  return result;
}

}  // namespace lieswarm
