#include <benchmark/benchmark.h>

#include "sgmproxy/losses.hpp"
#include "sgmproxy/synth.hpp"

namespace {

using namespace sgmproxy;

struct LossInputs {
  SyntheticScene scene;
  MultiScaleDisparities init;
  std::vector<DisparityMap> refined;
};

LossInputs inputs(int width, int height) {
  LossInputs in{random_dot_scene(random_scene_spec(width, height, 2, width / 8, 7)), {}, {}};
  DisparityMap d = in.scene.gt_disparity;
  for (double& v : d.data()) v += 0.3;
  in.init.left.assign(4, d);
  in.init.right.assign(4, d);
  in.refined.assign(3, d);
  return in;
}

void BM_Ssim(benchmark::State& state) {
  const SyntheticScene s = random_dot_scene(random_scene_spec(640, 192, 2, 40, 3));
  for (auto _ : state) benchmark::DoNotOptimize(ssim(s.left, s.right));
  state.SetItemsProcessed(state.iterations() * s.left.size());
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_LossInit(benchmark::State& state) {
  const LossInputs in = inputs(320, 96);
  const LossWeights w;
  const bool grad = state.range(0) != 0;
  const DisparityMap& proxy = in.scene.gt_disparity;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        loss_init(in.init, in.scene.left, in.scene.right, proxy, proxy, w, grad));
  }
}
BENCHMARK(BM_LossInit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LossRef(benchmark::State& state) {
  const LossInputs in = inputs(320, 96);
  const LossWeights w;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        loss_ref(in.refined, in.scene.left, in.scene.right, in.scene.gt_disparity, w, true));
  }
}
BENCHMARK(BM_LossRef)->Unit(benchmark::kMillisecond);

}  // namespace
