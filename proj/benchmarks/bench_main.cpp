#include <benchmark/benchmark.h>

#include <random>

#include "tmcsig/reference_data.hpp"
#include "tmcsig/rl_scheduler.hpp"
#include "tmcsig/sim.hpp"
#include "tmcsig/trajectory.hpp"

using namespace tmcsig;

namespace {

Demand peak_hour() {
  DemandSpec spec;
  spec.profile.hours = {HourKind::Peak};
  spec.pattern = *find_pattern("PC");
  return generate_demand(spec);
}

void BM_SimPeakHour(benchmark::State& state) {
  const Demand d = peak_hour();
  const auto geo = reference_geometries().front();
  const SignalProgram prog = build_program(d.minutes, Policy::Dynamic, {90, 3, 5});
  for (auto _ : state) benchmark::DoNotOptimize(run(geo, d.plans, prog, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.plans.size()));
}
BENCHMARK(BM_SimPeakHour)->Unit(benchmark::kMillisecond);

void BM_Lcss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(0, 800);
  PointSeq a(n), b(n);
  for (auto& p : a) p = {c(rng), c(rng)};
  for (auto& p : b) p = {c(rng), c(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(lcss(a, b, 25.0));
}
BENCHMARK(BM_Lcss)->Arg(20)->Arg(100)->Arg(500);

void BM_DynamicPlan(benchmark::State& state) {
  const TmcTable& t = reference_intersections().front().observed;
  for (auto _ : state) benchmark::DoNotOptimize(dynamic_plan(t, {90, 3, 5}));
}
BENCHMARK(BM_DynamicPlan);

void BM_QForward(benchmark::State& state) {
  const QNetwork net({4, 32, 32, 84}, 1);
  const std::vector<double> x{0.2, 0.9, 0.4, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_QForward);

void BM_TrainEpisode(benchmark::State& state) {
  const Demand d = peak_hour();
  RlHyperParams hp;
  hp.episodes = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(d.minutes, {90, 3, 5}, 1, hp));
}
BENCHMARK(BM_TrainEpisode)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
