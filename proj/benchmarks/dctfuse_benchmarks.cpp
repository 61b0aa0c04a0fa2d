#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "dctfuse/dctfuse.hpp"

namespace {

using namespace dctfuse;

Image random_image(int w, int h, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(w, h, channels);
  for (double& v : img.data()) v = u(rng);
  return img;
}

ExposureSequence bracket(int side, int exposures) {
  const Image scene = random_image(side, side, 3, 7);
  std::vector<Image> images;
  for (int k = 0; k < exposures; ++k) {
    Image img = scene;
    const double gain = std::pow(2.0, k - exposures / 2);
    for (double& v : img.data()) v = std::min(1.0, v * gain);
    images.push_back(std::move(img));
  }
  return ExposureSequence(std::move(images));
}

void BM_Dct2Forward(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  const Dct2Plan plan(b);
  std::vector<double> in(static_cast<std::size_t>(b) * b, 0.25);
  std::vector<double> out(in.size());
  for (auto _ : state) {
    plan.forward(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Dct2Forward)->Arg(4)->Arg(8)->Arg(16);

void BM_BlockMatching(benchmark::State& state) {
  const int window = static_cast<int>(state.range(0));
  std::vector<Image> luma;
  for (int k = 0; k < 3; ++k) luma.push_back(random_image(128, 128, 1, 11 + k));
  const ExposureSequence seq(std::move(luma));
  MatchParams params;
  params.search_window = window;
  BlockMatcher matcher(seq, params);
  std::vector<BlockMatch> out;
  for (auto _ : state) {
    matcher.find({60, 60}, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BlockMatching)->Arg(15)->Arg(39);

void BM_FuseSequence(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ExposureSequence seq = bracket(side, 3);
  PipelineConfig cfg;
  cfg.deterministic = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_sequence(seq, cfg).data().data());
  }
  state.SetComplexityN(static_cast<std::int64_t>(side) * side);
}
BENCHMARK(BM_FuseSequence)->Arg(64)->Arg(128)->Arg(256)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

void BM_DenoiseAndFuse(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ExposureSequence seq = bracket(side, 3);
  PipelineConfig cfg;
  cfg.mode = Mode::Joint;
  cfg.fusion.sigma = 15.0 / 255.0;
  cfg.deterministic = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise_and_fuse(seq, cfg).data().data());
  }
  state.SetComplexityN(static_cast<std::int64_t>(side) * side);
}
BENCHMARK(BM_DenoiseAndFuse)->Arg(64)->Arg(128)->Arg(256)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
