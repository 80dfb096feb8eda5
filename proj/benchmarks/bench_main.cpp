#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lieswarm/agent.hpp"
#include "lieswarm/harness.hpp"
#include "lieswarm/scenario.hpp"
#include "lieswarm/so3.hpp"

using namespace lieswarm;

static void BM_ExpSo3(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<Vec3> ws(1024);
  for (auto& w : ws) w = {u(rng), u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_so3(ws[i++ & 1023]));
  }
}
BENCHMARK(BM_ExpSo3);

static void BM_AgentTick(benchmark::State& state) {
  const Scenario sc = bundled_scenario("sim50");
  AgentRuntime rt;
  rt.phi = 0.3;
  const Vec3 x = curve_point(0.3, sc.control.embedding) + Vec3{0.1, -0.2, 0.05};
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent_tick(rt, x, {0.42, 0.17}, sc.control));
  }
}
BENCHMARK(BM_AgentTick);

static void BM_Sim50(benchmark::State& state) {
  Scenario sc = bundled_scenario("sim50");
  sc.duration = 10.0;
  RunOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  opts.keep_frames = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(sc, opts));
  }
  state.SetItemsProcessed(state.iterations() * sc.ticks() * sc.n_agents);
}
BENCHMARK(BM_Sim50)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
