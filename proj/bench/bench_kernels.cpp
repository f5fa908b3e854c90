#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ratchet/experiments.hpp"
#include "ratchet/kernels.hpp"

using namespace ratchet;
using kernels::cplx;

namespace {

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 0.001 * static_cast<double>(i);
  return v;
}

template <auto Fn>
void bm_unimodular(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto phase = ramp(n);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    Fn(phase, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_quadratic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = ramp(n);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    Fn(q, 0.785, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_multiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<cplx> data(n, cplx(1.0, 0.0)), factor(n, std::polar(1.0, 0.1));
  for (auto _ : state) {
    Fn(data, factor);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ScanSpec scan() {
  ScanSpec s;
  s.hbar_values = hbar_grid(0.02 * kPi, 2 * kPi, 0.02 * kPi);
  return s;
}

void bm_scan_parallel(benchmark::State& state) {
  const auto s = scan();
  for (auto _ : state) benchmark::DoNotOptimize(run_fig4(s));
}

void bm_scan_serial(benchmark::State& state) {
  const auto s = scan();
  for (auto _ : state) benchmark::DoNotOptimize(run_fig4_serial(s));
}

}  // namespace

BENCHMARK(bm_unimodular<kernels::serial::unimodular>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_unimodular<kernels::unimodular>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_quadratic<kernels::serial::quadratic_phase>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_quadratic<kernels::quadratic_phase>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_multiply<kernels::serial::multiply>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_multiply<kernels::multiply>)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_scan_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
