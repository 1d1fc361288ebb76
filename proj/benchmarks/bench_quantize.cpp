#include <benchmark/benchmark.h>

#include <cmath>

#include "cphmm/quantize.hpp"

namespace {

void BM_FitCodebook(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  // Pooled values of a full-size corpus: 20 x 10 x 15 sequences of 64 samples.
  std::vector<double> values(20 * 10 * 15 * 64);
  for (std::size_t t = 0; t < values.size(); ++t) values[t] = std::sin(0.37 * t) + 0.3 * std::sin(0.011 * t);
  for (auto _ : state) benchmark::DoNotOptimize(cphmm::fit_codebook(values, c, 1));
}
BENCHMARK(BM_FitCodebook)->DenseRange(4, 11, 7)->Unit(benchmark::kMillisecond);

void BM_SymbolFor(benchmark::State& state) {
  const cphmm::Codebook cb({-1.5, -0.8, -0.3, 0.0, 0.4, 0.9, 1.3, 2.0, 2.6, 3.1, 3.9});
  double v = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cb.symbol_for(v));
    v = v > 4.0 ? -3.0 : v + 0.01;
  }
}
BENCHMARK(BM_SymbolFor);

}  // namespace
