#include <benchmark/benchmark.h>

#include <random>

#include "coposlab/cones.hpp"
#include "coposlab/quartic.hpp"
#include "coposlab/sdp.hpp"
#include "coposlab/volume.hpp"

namespace coposlab {
namespace {

SymMatrixF random_sym(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymMatrixF a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, u(rng) + (i == j ? 2.0 : 0.0));
  return a;
}

void BM_SpnDecompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const SymMatrixF a = random_sym(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spn_decompose(a));
}
BENCHMARK(BM_SpnDecompose)->Arg(5)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ParriloHorn(benchmark::State& state) {
  const SymMatrixF h = to_float(horn_matrix());
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(parrilo_member(h, r));
}
BENCHMARK(BM_ParriloHorn)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CopRefute(benchmark::State& state) {
  const SymMatrixF h = to_float(horn_matrix());
  for (auto _ : state) benchmark::DoNotOptimize(cop_refute(h));
}
BENCHMARK(BM_CopRefute)->Unit(benchmark::kMillisecond);

void BM_ApplyT(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SymMatrixR a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, make_rational(i + 2 * j - 3, 7));
  const EvenQuartic f{a};
  for (auto _ : state) benchmark::DoNotOptimize(apply_T(f));
}
BENCHMARK(BM_ApplyT)->Arg(5)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_Radial(benchmark::State& state) {
  SectionSpec spec;
  spec.cone = static_cast<SectionCone>(state.range(0));
  spec.n = 5;
  const Section s(spec);
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.radial(sample_direction(s.dim(), 7, k++)));
  state.SetLabel(to_string(spec.cone));
}
BENCHMARK(BM_Radial)
    ->Arg(static_cast<int>(SectionCone::NN))
    ->Arg(static_cast<int>(SectionCone::PSD))
    ->Arg(static_cast<int>(SectionCone::DNN))
    ->Arg(static_cast<int>(SectionCone::SPN))
    ->Unit(benchmark::kMicrosecond);

void BM_VradNn(benchmark::State& state) {
  SectionSpec spec;
  spec.n = 5;
  VradOptions opt;
  opt.samples = static_cast<int>(state.range(0));
  opt.bootstrap = 200;
  for (auto _ : state) benchmark::DoNotOptimize(vrad_mc(spec, opt));
}
BENCHMARK(BM_VradNn)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace coposlab

BENCHMARK_MAIN();
