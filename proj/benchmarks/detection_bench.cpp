#include <benchmark/benchmark.h>

#include "icls/detection.hpp"

using namespace icls;

namespace {

std::vector<CplxVec> faded_frames(std::size_t n, std::size_t samples_per_frame) {
  ChannelParams p;
  Rng rng(7);
  std::vector<CplxVec> frames;
  frames.reserve(n);
  for (std::size_t f = 0; f < n; ++f)
    frames.push_back(CplxVec(samples_per_frame, fading_coefficient(p, rng)));
  return frames;
}

}  // namespace

static void BM_EnvelopeHistogram(benchmark::State& state) {
  const auto frames = faded_frames(100, 48);
  for (auto _ : state) {
    auto h = empirical_histogram(envelope_observable(frames));
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_EnvelopeHistogram);

static void BM_KlDetect(benchmark::State& state) {
  DetectorConfig cfg;
  KlDetector det = calibrate_baseline(faded_frames(1000, 48), cfg);
  const auto window = faded_frames(100, 48);
  for (auto _ : state) {
    auto d = kl_detect(det, window);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_KlDetect);

static void BM_PartitionStats(benchmark::State& state) {
  ChannelParams p;
  Rng rng(9);
  AnchorObservation obs;
  obs.layout = FrameLayout{};
  obs.beacon_ref = bpsk_modulate(default_beacon_pattern());
  obs.samples.resize(40);
  for (auto& s : obs.samples) s = fading_coefficient(p, rng);
  TxBits bits{default_beacon_pattern(), BitVector(8, 0), BitVector(96, 1)};
  for (auto _ : state) {
    auto st = partition_power_stats(obs, bits);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_PartitionStats);
