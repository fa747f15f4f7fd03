#include <benchmark/benchmark.h>

#include "icls/frame.hpp"

using namespace icls;

static void BM_BuildFrame(benchmark::State& state) {
  Rng rng(1);
  const BitVector header = random_bits(8, rng);
  const BitVector payload = random_bits(96, rng);
  for (auto _ : state) {
    auto frame = build_frame(default_beacon_pattern(), header, payload);
    benchmark::DoNotOptimize(frame);
  }
}
BENCHMARK(BM_BuildFrame);

static void BM_Qam16RoundTrip(benchmark::State& state) {
  Rng rng(2);
  const BitVector bits = random_bits(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    auto rx = qam16_demodulate(qam16_modulate(bits));
    benchmark::DoNotOptimize(rx);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Qam16RoundTrip)->Arg(96)->Arg(960)->Arg(9600);

static void BM_BpskDemodulate(benchmark::State& state) {
  Rng rng(3);
  const CplxVec sym = bpsk_modulate(random_bits(1024, rng));
  for (auto _ : state) {
    auto bits = bpsk_demodulate(sym);
    benchmark::DoNotOptimize(bits);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_BpskDemodulate);

BENCHMARK_MAIN();
