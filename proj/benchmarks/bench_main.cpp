#include <benchmark/benchmark.h>

#include "uniharm/criteria.hpp"
#include "uniharm/geometry.hpp"
#include "uniharm/maps.hpp"
#include "uniharm/oracle.hpp"

using namespace uniharm;

namespace {

// 0.3 + |z|^2 z
MapData biharmonic() {
  return AlmansiMap(2, {HarmonicComponent::analytic({0.3}), HarmonicComponent::analytic({0.0, 1.0})});
}

MapData cardioid() { return HarmonicComponent::analytic({0.0, 1.0, 0.45}); }

}  // namespace

static void BM_SupDisk(benchmark::State& state) {
  const Ratio ratio(RatioKind::kT2, biharmonic());
  SupPlan plan;
  plan.nr = static_cast<int>(state.range(0));
  plan.ntheta = 4 * plan.nr;
  for (auto _ : state) {
    auto s = sup_disk([&](cplx z) { return ratio(z); }, plan);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * plan.nr * plan.ntheta);
}
BENCHMARK(BM_SupDisk)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_InjectivityScan(benchmark::State& state) {
  const MapEvaluator f(biharmonic());
  OracleGrid grid;
  grid.n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = injectivity_scan(f, grid);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_InjectivityScan)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ConnectivityEstimate(benchmark::State& state) {
  const BoundaryPolyline poly = boundary_polyline(cardioid(), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto c = connectivity_estimate(poly, 1000, 0);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ConnectivityEstimate)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
