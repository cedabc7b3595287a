#include <benchmark/benchmark.h>

#include "bimero/corpus.hpp"
#include "bimero/energy.hpp"
#include "bimero/lyapunov.hpp"
#include "bimero/measure.hpp"
#include "bimero/potential.hpp"
#include "bimero/random.hpp"

using namespace bimero;

static void BM_ExactComposition(benchmark::State& state) {
  const auto f = corpus::lsigma();
  for (auto _ : state) {
    PolyTriple it = f.forward();
    for (int k = 1; k < state.range(0); ++k) it = compose(f.forward(), it);
    benchmark::DoNotOptimize(it);
  }
}
BENCHMARK(BM_ExactComposition)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_DegreeSequence(benchmark::State& state) {
  const auto h = corpus::henon();
  for (auto _ : state) benchmark::DoNotOptimize(degree_sequence(h, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DegreeSequence)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_GreenTermwise(benchmark::State& state) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  auto rng = substream(1, 0);
  std::vector<ProjectivePoint> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(uniform_point(rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ev.green_partial(pts[i++ % pts.size()], static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GreenTermwise)->Arg(25)->Arg(50)->Arg(200);

static void BM_GreenTelescoped(benchmark::State& state) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  auto rng = substream(1, 0);
  std::vector<ProjectivePoint> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(uniform_point(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.green_telescoped(pts[i++ % pts.size()], static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GreenTelescoped)->Arg(25)->Arg(50)->Arg(200);

static void BM_SaddleSearch(benchmark::State& state) {
  const auto h = corpus::henon();
  for (auto _ : state) benchmark::DoNotOptimize(saddle_cloud(h, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SaddleSearch)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_CocycleExponents(benchmark::State& state) {
  const auto h = corpus::henon();
  const auto cloud = saddle_cloud(h, 6);
  LyapunovOptions opts;
  opts.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cocycle_exponents(h, cloud, opts));
}
BENCHMARK(BM_CocycleExponents)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_EnergyGrid(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const GridChart grid{ProjectivePoint(0, 0, 1), 2, 0.5, res};
  const auto u = functions::bump(Vec2::Zero(), 0.5);
  const auto t = functions::euclidean_form();
  for (auto _ : state) benchmark::DoNotOptimize(energy(u, t, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_EnergyGrid)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
