#include <benchmark/benchmark.h>

#include "lrrl/envs.hpp"
#include "lrrl/mlp.hpp"
#include "lrrl/replay.hpp"
#include "lrrl/sac.hpp"

namespace {

using namespace lrrl;

ReplayBuffer make_valve_buffer(std::size_t n) {
  TaskSpec spec = default_task(Family::Valve);
  Rng rng(7);
  ReplayBuffer buffer(spec.state_dim(), spec.action_dim(), spec.task_id);
  EnvState state = env_reset(spec, rng);
  while (buffer.size() < n) {
    const double action = rng.uniform(-1.0, 1.0);
    StepResult step = env_step(spec, state, std::span<const double>(&action, 1));
    Transition t;
    t.s.assign(state.obs.begin(), state.obs.end());
    t.a = {static_cast<float>(action)};
    t.s_next.assign(step.next_state.obs.begin(), step.next_state.obs.end());
    t.r = static_cast<float>(step.reward);
    t.done = step.done;
    t.task_id = 1;
    buffer.push(std::move(t));
    state = step.done ? env_reset(spec, rng) : step.next_state;
  }
  return buffer;
}

void BM_MlpForwardBatch(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Mlp mlp = mlp_init(1, {3, 256, 256, 2});
  Mat x = Mat::Random(batch, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlp_forward_batch(mlp, x));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpForwardBatch)->Arg(1)->Arg(64)->Arg(256);

void BM_MlpBackwardBatch(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Mlp mlp = mlp_init(1, {3, 256, 256, 2});
  Mat x = Mat::Random(batch, 3);
  Mat upstream = Mat::Ones(batch, 2) / static_cast<double>(batch);
  for (auto _ : state) {
    ForwardCache cache;
    mlp_forward_cached(mlp, x, cache);
    benchmark::DoNotOptimize(mlp_backward_batch(mlp, cache, upstream));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpBackwardBatch)->Arg(64)->Arg(256);

void BM_EnvStep(benchmark::State& state) {
  TaskSpec spec = default_task(Family::Valve);
  Rng rng(3);
  EnvState env = env_reset(spec, rng);
  const double action = 0.5;
  for (auto _ : state) {
    StepResult step = env_step(spec, env, std::span<const double>(&action, 1));
    env = step.done ? env_reset(spec, rng) : step.next_state;
    benchmark::DoNotOptimize(env.obs.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStep);

void BM_BufferSample(benchmark::State& state) {
  ReplayBuffer buffer = make_valve_buffer(50000);
  Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(buffer.sample_batch(256, rng));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_BufferSample);

void BM_SacUpdate(benchmark::State& state) {
  TaskSpec spec = default_task(Family::Valve);
  SacConfig config;
  config.hidden = {static_cast<int>(state.range(0)),
                   static_cast<int>(state.range(0))};
  config.batch_size = static_cast<int>(state.range(1));
  Agent agent = Agent::init(5, spec.state_dim(), spec.action_dim(), config);
  ReplayBuffer buffer = make_valve_buffer(5000);
  Rng rng(13);
  for (auto _ : state) {
    Batch batch = buffer.sample_batch(config.batch_size, rng);
    benchmark::DoNotOptimize(sac_update(agent, batch, config, rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SacUpdate)->Args({64, 128})->Args({256, 256});

}  // namespace

BENCHMARK_MAIN();
