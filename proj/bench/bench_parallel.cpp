// Serial reference against the OpenMP path for the three data-parallel loops.
#include <benchmark/benchmark.h>

#include <cmath>

#include "bsx/clt.hpp"
#include "bsx/esseen_multi.hpp"
#include "bsx/kernels.hpp"
#include "bsx/rng.hpp"

namespace {

bsx::Exec mode(const benchmark::State& st) { return st.range(0) ? bsx::Exec::parallel : bsx::Exec::serial; }

void BM_KernelSweep(benchmark::State& st) {
  bsx::Philox g(1, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = -50.0 + 100.0 * g.uniform();
  for (auto _ : st) {
    auto v = bsx::kernels::sweep({bsx::kernels::Tag::B}, xs, {}, mode(st));
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(xs.size()));
}

void BM_TensorIntegrate(benchmark::State& st) {
  const auto nodes = bsx::num::panel_nodes(bsx::num::uniform_breaks(-6.0, 6.0, 0.25), 20);
  auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]) * std::cos(x[0] * x[1]); };
  for (auto _ : st) benchmark::DoNotOptimize(bsx::multi::tensor_integrate({nodes, nodes}, f, mode(st)));
}

void BM_MonteCarlo(benchmark::State& st) {
  const auto law = bsx::clt::haar_circle_law();
  for (auto _ : st) {
    auto r = bsx::clt::vector_statistic(law, bsx::clt::constant_scheme(), {7, 20000, 100, mode(st)});
    benchmark::DoNotOptimize(r.ks_re.data());
  }
}

}  // namespace

BENCHMARK(BM_KernelSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TensorIntegrate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
