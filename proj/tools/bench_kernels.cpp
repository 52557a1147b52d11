// Serial-vs-OpenMP timing for the grid kernels. The parallel variants are
// bitwise identical to the serial references; this target measures what the
// parallelism buys at different grid sizes.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "exalm/kernels.hpp"

namespace {

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

void bm_tail_serial(benchmark::State& state) {
  const std::size_t lines = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 256;
  std::vector<double> in = random_field(lines * n, 42), out(lines * n);
  for (auto _ : state) {
    exalm::kern::tail_midpoint_serial(in.data(), lines, n, 1, 1e-2, out.data());
    benchmark::ClobberMemory();
  }
}

void bm_tail_parallel(benchmark::State& state) {
  const std::size_t lines = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 256;
  std::vector<double> in = random_field(lines * n, 42), out(lines * n);
  exalm::kern::set_parallel(true);
  for (auto _ : state) {
    exalm::kern::tail_midpoint(in.data(), lines, n, 1, 1e-2, out.data());
    benchmark::ClobberMemory();
  }
}

void bm_scan_serial(benchmark::State& state) {
  const std::size_t lines = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 256;
  std::vector<double> in = random_field(lines * n, 7), out(lines * (n + 1));
  for (auto _ : state) {
    exalm::kern::scan_cells_to_nodes_serial(in.data(), lines, n, 1, 1e-2, out.data());
    benchmark::ClobberMemory();
  }
}

void bm_scan_parallel(benchmark::State& state) {
  const std::size_t lines = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 256;
  std::vector<double> in = random_field(lines * n, 7), out(lines * (n + 1));
  exalm::kern::set_parallel(true);
  for (auto _ : state) {
    exalm::kern::scan_cells_to_nodes(in.data(), lines, n, 1, 1e-2, out.data());
    benchmark::ClobberMemory();
  }
}

void bm_dot_serial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a = random_field(n, 1), b = random_field(n, 2), w(n, 1e-3);
  for (auto _ : state) {
    double s = exalm::kern::dot_weighted_serial(a.data(), b.data(), w.data(), n);
    benchmark::DoNotOptimize(s);
  }
}

void bm_dot_parallel(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a = random_field(n, 1), b = random_field(n, 2), w(n, 1e-3);
  exalm::kern::set_parallel(true);
  for (auto _ : state) {
    double s = exalm::kern::dot_weighted(a.data(), b.data(), w.data(), n);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK(bm_tail_serial)->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK(bm_tail_parallel)->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK(bm_scan_serial)->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK(bm_scan_parallel)->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK(bm_dot_serial)->Arg(1 << 12)->Arg(1 << 18)->Arg(1 << 22);
BENCHMARK(bm_dot_parallel)->Arg(1 << 12)->Arg(1 << 18)->Arg(1 << 22);

BENCHMARK_MAIN();
