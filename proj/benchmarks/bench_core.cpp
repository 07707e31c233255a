#include <benchmark/benchmark.h>

#include "connect_later/harness.hpp"
#include "connect_later/linalg.hpp"

using namespace connect_later;

namespace {

AugmentationGraph misaligned() { return build_connect_later_graph(GraphParams{}); }

void BM_SymEig8(benchmark::State& state) {
  const Matrix a = normalized_adjacency(positive_pair_matrix(misaligned()));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(a));
}
BENCHMARK(BM_SymEig8);

void BM_ClosedForm(benchmark::State& state) {
  const PositivePairMatrix sp = positive_pair_matrix(misaligned());
  for (auto _ : state) benchmark::DoNotOptimize(pretrain_closed_form(sp, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ClosedForm)->Arg(2)->Arg(8);

void BM_GradientDescent(benchmark::State& state) {
  const PositivePairMatrix sp = positive_pair_matrix(misaligned());
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(pretrain_gd(sp, static_cast<std::size_t>(state.range(0)), {}, rng));
  }
}
BENCHMARK(BM_GradientDescent)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ErmMinimizers(benchmark::State& state) {
  const AugmentationGraph g = misaligned();
  const FtAugmentation aug = graph_targeted_aug(g, GraphAugMode::class_consistent);
  for (auto _ : state) benchmark::DoNotOptimize(erm_minimizers(g, aug));
}
BENCHMARK(BM_ErmMinimizers);

void BM_AppendixRepro(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_appendix_repro(AppendixConfig{}));
}
BENCHMARK(BM_AppendixRepro)->Unit(benchmark::kMillisecond);

LightCurve bench_curve() {
  RedshiftDemoConfig cfg;
  Rng rng(3);
  return synth_population_member(cfg, 0.2, cfg.source_noise, "bench", rng);
}

void BM_FitGp(benchmark::State& state) {
  const LightCurve lc = bench_curve();
  for (auto _ : state) benchmark::DoNotOptimize(fit_gp(lc));
  state.counters["n_obs"] = static_cast<double>(lc.size());
}
BENCHMARK(BM_FitGp)->Unit(benchmark::kMillisecond);

void BM_RedshiftAugment(benchmark::State& state) {
  const LightCurve lc = bench_curve();
  const NoiseModel noise{{5500.0, 8000.0, 11000.0}, {8.0, 10.0, 12.0}};
  const Cosmology cosmo;
  Rng rng(4);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(redshift_augment(lc, noise, cosmo, rng));
    } catch (const AugmentationError&) {
    }
  }
}
BENCHMARK(BM_RedshiftAugment)->Unit(benchmark::kMillisecond);

void BM_StainJitter64(benchmark::State& state) {
  RgbImage img(64, 64, Rgb{232, 190, 210});
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(stain_color_jitter(img, 0.05, rng));
}
BENCHMARK(BM_StainJitter64);

}  // namespace
BENCHMARK_MAIN();
