#include <benchmark/benchmark.h>

#include "fringeproc/classic.hpp"
#include "fringeproc/fft.hpp"
#include "fringeproc/filters.hpp"
#include "fringeproc/hst.hpp"
#include "fringeproc/network.hpp"
#include "fringeproc/simulate.hpp"
#include "fringeproc/unwrap.hpp"

namespace {

using namespace fringe;

RealImage test_fringe(std::size_t n) {
  auto phase = sim::gen_carrier(n, n, {14.0, 0.4});
  const auto bump = sim::gen_peaks_phase(n, n, 3.0);
  for (std::size_t i = 0; i < phase.size(); ++i) phase[i] += bump[i];
  return sim::render_fringe(phase);
}

void BM_fft2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto img = to_complex(test_fringe(n));
  for (auto _ : state) benchmark::DoNotOptimize(fft2(img));
}
BENCHMARK(BM_fft2)->Arg(256)->Arg(512);

void BM_gradients(benchmark::State& state) {
  const auto img = test_fringe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradients(img));
}
BENCHMARK(BM_gradients)->Arg(512);

void BM_cpfg(benchmark::State& state) {
  const auto img = classic::prefilter(test_fringe(static_cast<std::size_t>(state.range(0))));
  const classic::WindowSpec win{2};
  for (auto _ : state) benchmark::DoNotOptimize(classic::cpfg_orientation(img, win));
}
BENCHMARK(BM_cpfg)->Arg(512);

void BM_forward(benchmark::State& state) {
  deep::NetworkConfig cfg;
  cfg.filters = static_cast<int>(state.range(1));
  const auto weights = deep::build_network(cfg, 1);
  const auto img = classic::prefilter(test_fringe(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(deep::forward(weights, img));
}
BENCHMARK(BM_forward)->Args({64, 16})->Args({256, 16})->Unit(benchmark::kMillisecond);

void BM_unwrap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto phase = sim::gen_carrier(n, n, {14.0, 0.4});
  const auto fo = sim::ground_truth_orientation(phase);
  for (auto _ : state) benchmark::DoNotOptimize(unwrap::orientation_to_direction(fo));
}
BENCHMARK(BM_unwrap)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_demodulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto phase = sim::gen_carrier(n, n, {14.0, 0.4});
  const auto beta = sim::ground_truth_direction(phase);
  const auto img = sim::render_fringe(phase);
  for (auto _ : state) benchmark::DoNotOptimize(hst::demodulate(img, beta));
}
BENCHMARK(BM_demodulate)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
