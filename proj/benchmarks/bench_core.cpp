#include <benchmark/benchmark.h>

#include "persplab/matching.hpp"
#include "persplab/selection.hpp"

namespace {

using namespace persplab;

GridWorldInstance world_for(int side) {
  Rng rng = make_stream(1, Stream::world);
  GridSpec spec;
  spec.grid_side = side;
  return build_gridworld(spec, rng);
}

void BM_OptimalPlan(benchmark::State& state) {
  const GridWorldInstance world = world_for(static_cast<int>(state.range(0)));
  const Vector reward = world.reward_vector();
  for (auto _ : state) benchmark::DoNotOptimize(solve_optimal_policy(world.mdp, reward).value);
}
BENCHMARK(BM_OptimalPlan)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_OccupancyOfPolicy(benchmark::State& state) {
  const GridWorldInstance world = world_for(10);
  const Policy pi = Policy::uniform(world.mdp.n_states(), world.mdp.n_actions());
  for (auto _ : state) benchmark::DoNotOptimize(occupancy_of_policy(world.mdp, pi).mu.sum());
}
BENCHMARK(BM_OccupancyOfPolicy)->Unit(benchmark::kMicrosecond);

void BM_MatchFeatures(benchmark::State& state) {
  const GridWorldInstance world = world_for(10);
  const OptimalPlan plan = solve_optimal_policy(world.mdp, world.reward_vector());
  const Policy expert = extract_policy(plan.occupancy, world.mdp.n_actions());
  const PerspectiveSet set = basis_perspectives(4, 12);
  ObservationStore store(set);
  Rng demo = make_stream(1, Stream::demonstrations);
  std::vector<double> weights(set.size(), 1.0);
  for (int i = 0; i < 16; ++i) {
    store.record(i, observe(sample_demonstration(world.mdp, expert, world.features, 30, demo),
                            set[static_cast<std::size_t>(i)]));
  }
  PlanningOptions opts;
  if (state.range(0)) opts.warm_start_actions = expert.greedy_actions();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        match_features(world.mdp, world.features, set, store, weights, opts).objective);
  }
}
BENCHMARK(BM_MatchFeatures)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LogDetScores(benchmark::State& state) {
  Rng rng = make_stream(1, Stream::perspectives);
  const PerspectiveSet set = random_perspectives(4, 40, 0.5, rng);
  const Matrix design = Matrix::Identity(4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_logdet_index(design, set));
}
BENCHMARK(BM_LogDetScores);

}  // namespace
BENCHMARK_MAIN();
