#include <benchmark/benchmark.h>

#include "cphmm/hmm.hpp"

namespace {

std::vector<int> cyclic_symbols(int length, int alphabet) {
  std::vector<int> out(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) out[static_cast<std::size_t>(t)] = 1 + (t * 7 + t / 5) % alphabet;
  return out;
}

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = cphmm::init_random(n, 8, 1);
  const auto symbols = cyclic_symbols(64, 8);
  for (auto _ : state) benchmark::DoNotOptimize(cphmm::forward_log_likelihood(model, symbols));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_Forward)->DenseRange(2, 16, 2);

}  // namespace
