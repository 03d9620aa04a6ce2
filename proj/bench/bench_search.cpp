#include <benchmark/benchmark.h>

#include "latticelab/certify.hpp"
#include "latticelab/random.hpp"
#include "latticelab/search.hpp"

using namespace latticelab;

namespace {

const NormOracle& pullback8() {
  static const NormOracle norm = NormOracle::compile(spec::vbasis_pullback(8));
  return norm;
}

const NormOracle& bbody() {
  static const NormOracle norm = NormOracle::compile(spec::gauge(body::sign_split_disc()));
  return norm;
}

// Kernel alone: norm evaluations over a fixed candidate list.
void BM_ArgmaxKernel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  const auto& norm = pullback8();
  std::vector<std::vector<double>> xs;
  for (std::size_t i = 0; i < 20000; ++i) {
    auto rng = stream_for(0, 0, i);
    xs.push_back(random_unit(rng, 8));
  }
  for (auto _ : state) {
    const auto best = parallel_argmax(xs.size(), [&](std::size_t i) { return norm(xs[i]); }, {jobs});
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
}
BENCHMARK(BM_ArgmaxKernel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_RestrictionConstant(benchmark::State& state) {
  CertifyOptions opt;
  opt.budget = {2000, 100};
  opt.exec = {static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(restriction_constant(pullback8(), opt).value);
}
BENCHMARK(BM_RestrictionConstant)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_IdealConstantGauge(benchmark::State& state) {
  CertifyOptions opt;
  opt.budget = {5000, 100};
  opt.exec = {static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ideal_constant(bbody(), opt).value);
}
BENCHMARK(BM_IdealConstantGauge)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
