#include <benchmark/benchmark.h>

#include "sgmproxy/census.hpp"
#include "sgmproxy/consistency.hpp"
#include "sgmproxy/sgm.hpp"
#include "sgmproxy/synth.hpp"

namespace {

using namespace sgmproxy;

SyntheticScene scene(int width, int height) {
  return random_dot_scene(random_scene_spec(width, height, 3, width / 8, 42));
}

void BM_CensusTransform(benchmark::State& state) {
  const Image gray = to_grayscale(scene(static_cast<int>(state.range(0)), 192).left);
  for (auto _ : state) benchmark::DoNotOptimize(census_transform(gray));
  state.SetItemsProcessed(state.iterations() * gray.width() * gray.height());
}
BENCHMARK(BM_CensusTransform)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_CostVolume(benchmark::State& state) {
  const SyntheticScene s = scene(640, 192);
  const CensusField l = census_transform(to_grayscale(s.left));
  const CensusField r = census_transform(to_grayscale(s.right));
  const int d_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_cost_volume(l, r, d_max));
  state.SetItemsProcessed(state.iterations() * l.width() * l.height() * d_max);
}
BENCHMARK(BM_CostVolume)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_AggregateAll(benchmark::State& state) {
  const SyntheticScene s = scene(640, 192);
  const CostVolume c = build_cost_volume(census_transform(to_grayscale(s.left)),
                                         census_transform(to_grayscale(s.right)), 64);
  SgmParams params;
  params.d_max = 64;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_all(c, params, threads));
  state.SetItemsProcessed(state.iterations() * c.width() * c.height() * c.depth());
}
BENCHMARK(BM_AggregateAll)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_DistillProxy(benchmark::State& state) {
  const SyntheticScene s = scene(640, 192);
  SgmParams params;
  params.d_max = 64;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distill_proxy(s.left, s.right, params, {}, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * s.left.width() * s.left.height());
}
BENCHMARK(BM_DistillProxy)->Unit(benchmark::kMillisecond);

}  // namespace
