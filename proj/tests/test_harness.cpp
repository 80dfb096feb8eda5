#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

#include "lieswarm/errors.hpp"
#include "lieswarm/harness.hpp"
#include "lieswarm/metrics.hpp"
#include "lieswarm/scenario.hpp"

using namespace lieswarm;
using std::numbers::pi;

namespace {

Scenario small(int n, double sigma, double duration) {
  Scenario sc;
  sc.name = "small";
  sc.control.embedding.r_d = 3.0;
  sc.control.embedding.omega_zd = 1.0;
  sc.control.embedding.center = {0, 0, 1.5};
  sc.control.embedding.deformation = preset("eq23").deformation;
  sc.control.phase.omega_zd = 1.0;
  sc.control.phase.k_phi = 3.0;
  sc.deformation_label = "eq23";
  sc.n_agents = n;
  sc.sigma = sigma;
  sc.duration = duration;
  sc.spawn.kind = SpawnSpec::Kind::NearCurve;
  sc.spawn.max_offset = 1.0;
  return sc;
}

bool same_frames(const RunResult& a, const RunResult& b) {
  if (a.frames.size() != b.frames.size()) return false;
  for (std::size_t k = 0; k < a.frames.size(); ++k) {
    const auto& fa = a.frames[k];
    const auto& fb = b.frames[k];
    if (fa.ring != fb.ring || fa.agents.size() != fb.agents.size()) return false;
    if (!(fa.lyapunov == fb.lyapunov || (std::isinf(fa.lyapunov) && std::isinf(fb.lyapunov))))
      return false;
    for (std::size_t i = 0; i < fa.agents.size(); ++i) {
      const auto& ra = fa.agents[i];
      const auto& rb = fb.agents[i];
      if (ra.id != rb.id || !(ra.x == rb.x) || !(ra.x_d == rb.x_d) || ra.phi != rb.phi ||
          ra.omega_zdi != rb.omega_zdi || ra.flags != rb.flags)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("capacity") {
  CHECK(capacity(10.0, 0.2) == 314);
  CHECK(capacity(1.0, 6.0) == 1);
  CHECK(capacity(3.0, 0.7) == 26);
  CHECK_THROWS_AS(capacity(0.0, 1.0), Error);
  CHECK_THROWS_AS(capacity(1.0, -1.0), Error);
}

TEST_CASE("spawn kinds") {
  Scenario sc = small(6, 0.0, 1.0);
  const auto near = spawn_agents(sc);
  REQUIRE(near.size() == 6);
  for (const auto& s : near) CHECK(s.v == Vec3{});

  sc.spawn.kind = SpawnSpec::Kind::OnCurve;
  sc.spawn.phases = SpawnSpec::Phases::Uniform;
  const auto on = spawn_agents(sc);
  for (int i = 0; i < 6; ++i) {
    const double phi = 2 * pi * i / 6;
    CHECK((on[static_cast<std::size_t>(i)].x - curve_point(phi, sc.control.embedding)).norm() <
          1e-9);
  }

  sc.spawn.kind = SpawnSpec::Kind::Box;
  sc.spawn.box_min = {-1, -2, 0};
  sc.spawn.box_max = {1, 2, 0.5};
  for (const auto& s : spawn_agents(sc)) {
    CHECK(s.x.x >= -1);
    CHECK(s.x.x <= 1);
    CHECK(s.x.y >= -2);
    CHECK(s.x.y <= 2);
    CHECK(s.x.z >= 0);
    CHECK(s.x.z <= 0.5);
  }

  sc.spawn.kind = SpawnSpec::Kind::Explicit;
  sc.spawn.positions = {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}, {5, 0, 0}, {6, 0, 0}};
  CHECK(spawn_agents(sc)[3].x == Vec3{4, 0, 0});
}

TEST_CASE("near-curve spawn keeps within the offset") {
  Scenario sc = small(20, 0.0, 1.0);
  sc.spawn.max_offset = 0.5;
  sc.spawn.phases = SpawnSpec::Phases::Uniform;
  const auto agents = spawn_agents(sc);
  for (int i = 0; i < 20; ++i) {
    const Vec3 c = curve_point(2 * pi * i / 20, sc.control.embedding);
    CHECK((agents[static_cast<std::size_t>(i)].x - c).norm() <= 0.5 + 1e-12);
  }
}

TEST_CASE("uniform start on the flat circle is a relative equilibrium") {
  Scenario sc = small(3, 0.0, 20.0);
  sc.control.embedding.deformation.s = 0.0;
  sc.spawn.kind = SpawnSpec::Kind::OnCurve;
  sc.spawn.phases = SpawnSpec::Phases::Uniform;
  sc.spawn.velocity = SpawnSpec::Velocity::Curve;
  const RunResult r = run(sc);
  double worst = 0.0;
  for (const auto& f : r.frames) {
    std::vector<double> phases;
    for (const auto& a : f.agents) phases.push_back(a.phi);
    for (double s : separations(phases)) worst = std::max(worst, std::abs(s - 120.0));
    for (const auto& a : f.agents) CHECK(std::abs(a.x.z - 1.5) < 1e-9);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("frames are well formed") {
  Scenario sc = small(5, 0.03, 6.0);
  InsertEvent ins;
  ins.largest_gap = true;
  sc.events.push_back({2.0, ins});
  sc.events.push_back({4.0, RemoveEvent{2}});
  const RunResult r = run(sc);
  REQUIRE(r.frames.size() == static_cast<std::size_t>(sc.ticks()));
  for (std::size_t k = 0; k < r.frames.size(); ++k) {
    const TickFrame& f = r.frames[k];
    CHECK(f.tick == static_cast<long>(k));
    CHECK(f.t == doctest::Approx(0.1 * static_cast<double>(k)));
    CHECK(f.ring.size() == f.agents.size());
    std::set<AgentId> ids;
    for (const auto& a : f.agents) ids.insert(a.id);
    CHECK(std::set<AgentId>(f.ring.begin(), f.ring.end()) == ids);
    CHECK(std::is_sorted(f.agents.begin(), f.agents.end(),
                         [](const auto& a, const auto& b) { return a.id < b.id; }));
    const std::size_t expected = f.t < 2.0 - 1e-9 ? 5 : (f.t < 4.0 - 1e-9 ? 6 : 5);
    CHECK(f.agents.size() == expected);
  }
  // The newcomer appears in one tick, with its flag, and id 6.
  const TickFrame& joined = r.frames[20];
  const auto it = std::find_if(joined.agents.begin(), joined.agents.end(),
                               [](const auto& a) { return a.id == 6; });
  REQUIRE(it != joined.agents.end());
  CHECK((it->flags & kFlagInserted) != 0);
  const auto gone = std::find_if(r.frames[40].agents.begin(), r.frames[40].agents.end(),
                                 [](const auto& a) { return a.id == 2; });
  CHECK(gone == r.frames[40].agents.end());
}

TEST_CASE("ring follows phase order under reassignment") {
  Scenario sc = small(8, 0.03, 10.0);
  const RunResult r = run(sc);
  for (const auto& f : r.frames) {
    std::vector<double> by_ring;
    for (AgentId id : f.ring) {
      for (const auto& a : f.agents)
        if (a.id == id) by_ring.push_back(a.phi);
    }
    int descents = 0;
    for (std::size_t i = 0; i < by_ring.size(); ++i)
      if (by_ring[(i + 1) % by_ring.size()] < by_ring[i]) ++descents;
    CHECK(descents <= 1);
  }
}

TEST_CASE("runs are deterministic and thread-count independent") {
  Scenario sc = small(12, 0.03, 5.0);
  const RunResult a = run(sc);
  const RunResult b = run(sc);
  CHECK(same_frames(a, b));
  RunOptions opts;
  opts.threads = 4;
  CHECK(same_frames(a, run(sc, opts)));
  sc.seed = 2;
  CHECK_FALSE(same_frames(a, run(sc)));
}

TEST_CASE("sink sees every frame") {
  Scenario sc = small(3, 0.0, 1.0);
  long count = 0;
  RunOptions opts;
  opts.keep_frames = false;
  const RunResult r = run(sc, opts, [&](const TickFrame& f) {
    CHECK(f.tick == count);
    ++count;
  });
  CHECK(count == 10);
  CHECK(r.frames.empty());
}

TEST_CASE("bad events are rejected before running") {
  Scenario sc = small(3, 0.0, 2.0);
  sc.events.push_back({1.0, RemoveEvent{7}});
  CHECK_THROWS_AS(run(sc), ScenarioError);
  sc = small(2, 0.0, 2.0);
  sc.events = {{0.5, RemoveEvent{1}}};
  CHECK_THROWS_AS(run(sc), ScenarioError);
  sc = small(3, 0.0, 2.0);
  sc.n_agents = 1;
  CHECK_THROWS_AS(run(sc), ScenarioError);
}

TEST_CASE("frozen policy keeps links between events") {
  Scenario sc = small(6, 0.03, 5.0);
  sc.ring_policy = RingPolicy::Frozen;
  const RunResult r = run(sc);
  for (const auto& f : r.frames) {
    CHECK(f.ring == r.frames.front().ring);
    for (const auto& a : f.agents) CHECK((a.flags & kFlagRingReassigned) == 0);
  }
}

TEST_CASE("flat noise-free swarm settles into a rigid rotation") {
  Scenario sc = small(3, 0.0, 160.0);
  sc.control.embedding.r_d = 10.0;
  sc.control.embedding.center = {0, 0, 10};
  sc.control.embedding.omega_zd = 1.5;
  sc.control.phase.omega_zd = 1.5;
  sc.control.phase.k_phi = 0.02;
  sc.control.embedding.deformation.s = 0.0;
  sc.spawn.kind = SpawnSpec::Kind::OnCurve;
  sc.spawn.phases = SpawnSpec::Phases::Uniform;
  const RunResult r = run(sc);
  const Vec3 c = sc.control.embedding.center;
  const Vec3 a0 = r.frames[600].agents[0].x - c;
  const Vec3 a1 = r.frames[601].agents[0].x - c;
  const double angle = std::atan2(a0.x * a1.y - a0.y * a1.x, a0.x * a1.x + a0.y * a1.y);
  const Rotation step = exp_so3({0, 0, angle});
  const double radius = std::hypot(r.frames[600].agents[0].x.x, r.frames[600].agents[0].x.y);
  double worst_step = 0.0, worst_radius = 0.0, worst_height = 0.0, worst_sep = 0.0;
  for (std::size_t k = 600; k + 1 < r.frames.size(); ++k) {
    const auto& now = r.frames[k].agents;
    const auto& next = r.frames[k + 1].agents;
    std::vector<double> phases;
    for (std::size_t i = 0; i < now.size(); ++i) {
      const Vec3 predicted = c + apply(step, now[i].x - c);
      worst_step = std::max(worst_step, (next[i].x - predicted).norm());
      worst_radius = std::max(worst_radius, std::abs(std::hypot(now[i].x.x, now[i].x.y) - radius));
      worst_height = std::max(worst_height, std::abs(now[i].x.z - 10.0));
      phases.push_back(now[i].phi);
    }
    for (double s : separations(phases)) worst_sep = std::max(worst_sep, std::abs(s - 120.0));
  }
  CAPTURE(radius);
  CAPTURE(angle / sc.control.dt);
  CHECK(r.frames.size() - 600 >= 1000);
  CHECK(worst_step < 1e-6);
  CHECK(worst_radius < 1e-6);
  CHECK(worst_height < 1e-6);
  CHECK(worst_sep < 1e-6);
  CHECK(radius > 10.0);
}

TEST_CASE("physical5 property run") {
  const Scenario sc = bundled_scenario("physical5");
  const RunResult r = run(sc);
  MetricsOptions mo;
  mo.band_deg = sc.convergence_band_deg;
  const MetricsSummary m = summarize(r.frames, mo);
  REQUIRE(m.convergence_time_s);
  CHECK(*m.convergence_time_s < 20.0);
  for (double s : m.final_separations_deg) CHECK(std::abs(s - 72.0) < 1.0);
  REQUIRE(m.steady_min_distance_m);
  CHECK(*m.steady_min_distance_m >= 0.5);
  double after_spawn = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.frames.size(); ++k) {
    if (m.series.t[k] >= 1.0) after_spawn = std::min(after_spawn, m.series.min_distance_m[k]);
  }
  CHECK(after_spawn >= 0.5);
}
