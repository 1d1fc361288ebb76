#include <benchmark/benchmark.h>

#include "cphmm/hmm.hpp"

namespace {

// One (gesture, sensor, c) pair: 15 executions of length 64.
std::vector<cphmm::SymbolSequence> pair_corpus(int alphabet) {
  const auto truth = cphmm::init_random(4, alphabet, 9);
  std::vector<cphmm::SymbolSequence> out;
  for (int k = 0; k < 15; ++k) {
    cphmm::SymbolSequence s;
    s.id.execution = k;
    s.alphabet = alphabet;
    s.symbols = cphmm::sample_sequence(truth, 64, static_cast<std::uint64_t>(k));
    out.push_back(std::move(s));
  }
  return out;
}

void BM_BaumWelch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto corpus = pair_corpus(8);
  cphmm::TrainConfig config;
  config.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cphmm::baum_welch(corpus, n, 8, config));
}
BENCHMARK(BM_BaumWelch)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
