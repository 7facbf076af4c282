#include <benchmark/benchmark.h>

#include "gev/corpus.hpp"
#include "gev/parallel.hpp"
#include "gev/stft.hpp"

namespace {

struct Fixture {
  gev::SampledSignal f;
  gev::Window g;
};

const Fixture& fixture(std::size_t n) {
  static std::vector<std::pair<std::size_t, Fixture>> cache;
  for (const auto& [k, v] : cache) {
    if (k == n) return v;
  }
  gev::SignalSpec s;
  s.kind = gev::SignalKind::sawtooth;
  s.dt = 1.0 / 256.0;
  s.n = n;
  cache.emplace_back(n, Fixture{gev::generate(s), gev::make_gaussian(s.dt, 2048)});
  return cache.back().second;
}

void BM_StftSerial(benchmark::State& state) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gev::stft_serial(fx.f, fx.g, 1.0 / 32.0, 2048));
}

void BM_StftParallel(benchmark::State& state) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  state.counters["threads"] = gev::max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(gev::stft(fx.f, fx.g, 1.0 / 32.0, 2048));
}

void BM_StftFactorization(benchmark::State& state) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gev::stft_via_factorization(fx.f, fx.g, 1.0 / 32.0, 2048));
}

}  // namespace

BENCHMARK(BM_StftSerial)->Arg(8192)->Arg(32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StftParallel)->Arg(8192)->Arg(32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StftFactorization)->Arg(8192)->Arg(32768)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
