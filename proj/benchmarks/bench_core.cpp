#include <benchmark/benchmark.h>

#include <memory>

#include "nearunit/nearunit.hpp"

using namespace nearunit;

namespace {

EigenSpec real_spec(int p) {
  EigenSpec s;
  s.p = p;
  for (int i = 1; i < p; ++i) s.bulk.emplace_back(0.8 - 1.5 * i / p);
  return s;
}

void BM_CompanionModel(benchmark::State& state) {
  const EigenSpec s = real_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(companion_model(s, 5000));
}
BENCHMARK(BM_CompanionModel)->DenseRange(2, 8, 2);

void BM_BInverse(benchmark::State& state) {
  const CompanionModel m = companion_model(real_spec(static_cast<int>(state.range(0))), 5000);
  for (auto _ : state) benchmark::DoNotOptimize(b_inverse(m.A));
}
BENCHMARK(BM_BInverse)->DenseRange(2, 8, 2);

void BM_Simulate(benchmark::State& state) {
  auto model = std::make_shared<const CompanionModel>(companion_model(real_spec(3), state.range(0)));
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(5000)->Arg(100000);

void BM_Ols(benchmark::State& state) {
  auto model = std::make_shared<const CompanionModel>(companion_model(real_spec(3), state.range(0)));
  Rng rng(1);
  const TriangularPath path = simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(ols(path));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ols)->Arg(5000)->Arg(100000);

void BM_Replication(benchmark::State& state) {
  ExperimentConfig c;
  c.p = static_cast<int>(state.range(0));
  long i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(c, i++));
}
BENCHMARK(BM_Replication)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
