#include <benchmark/benchmark.h>

#include "whittle/whittle.hpp"

using namespace whittle;

namespace {

std::vector<ChannelModel> mixed_channels(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<ChannelModel> out;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(0.05 + 0.9 * rng.uniform(), 0.05 + 0.9 * rng.uniform(), 0.2 + 0.8 * rng.uniform());
  }
  return out;
}

void BM_IndexDiscounted(benchmark::State& state) {
  const auto chs = mixed_channels(64, 1);
  std::size_t i = 0;
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index_discounted(chs[i++ % chs.size()], 0.9, w));
    w = w >= 1.0 ? 0.0 : w + 0.013;
  }
}
BENCHMARK(BM_IndexDiscounted);

void BM_IndexAverage(benchmark::State& state) {
  const auto chs = mixed_channels(64, 2);
  std::size_t i = 0;
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index_average(chs[i++ % chs.size()], w));
    w = w >= 1.0 ? 0.0 : w + 0.013;
  }
}
BENCHMARK(BM_IndexAverage);

void BM_EvaluateArm(benchmark::State& state) {
  const ChannelModel ch(0.2, 0.8);
  double m = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_arm({ch, m, Discounted{0.9}}, 0.4));
    m = m >= 1.0 ? 0.0 : m + 0.0037;
  }
}
BENCHMARK(BM_EvaluateArm);

void BM_UpperBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BoundRequest req{mixed_channels(n, 3), n / 4, Discounted{0.9}, {}, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound_discounted(req));
  state.SetComplexityN(n);
}
BENCHMARK(BM_UpperBound)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_UpperBoundBisection(benchmark::State& state) {
  BoundRequest req{mixed_channels(64, 3), 16, Discounted{0.9}, {}, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound_bisection(req, 60));
}
BENCHMARK(BM_UpperBoundBisection);

void BM_Simulate(benchmark::State& state) {
  SimConfig cfg;
  cfg.channels = mixed_channels(8, 4);
  cfg.K = 2;
  cfg.policy = static_cast<PolicyKind>(state.range(0));
  cfg.criterion = Average{};
  cfg.horizon = 1000;
  cfg.replications = 20;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg).mean);
  state.SetLabel(std::string(policy_name(cfg.policy)));
  state.SetItemsProcessed(state.iterations() * cfg.horizon * cfg.replications);
}
BENCHMARK(BM_Simulate)->Arg(static_cast<int>(PolicyKind::kWhittle))->Arg(static_cast<int>(PolicyKind::kMyopic));

void BM_OracleSolve(benchmark::State& state) {
  ValueIterationOracle oracle(ChannelModel(0.2, 0.8), 0.9, 0.4, 1e-9);
  double m = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.solve(m));
    m = m >= 1.0 ? 0.0 : m + 0.0037;
  }
}
BENCHMARK(BM_OracleSolve);

}  // namespace

BENCHMARK_MAIN();
