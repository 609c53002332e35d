// OpenMP kernels against their serial references on the bundled
// 16-variable circuit. Set OMP_NUM_THREADS to vary the team size.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "pcmmap/io.hpp"
#include "pcmmap/oracle.hpp"
#include "pcmmap/solver.hpp"

namespace {

using namespace pcmmap;

const Circuit& circuit() {
  static const Circuit c = read_circuit(PCMMAP_BENCH_DATA "/rand16.pc");
  return c;
}

std::vector<Var> first_vars(std::size_t n) {
  std::vector<Var> q(n);
  std::iota(q.begin(), q.end(), Var{0});
  return q;
}

void oracle_parallel(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_mmap(circuit(), q));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << q.size()));
}

void oracle_serial(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_mmap_serial(circuit(), q));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << q.size()));
}

void edge_oracle_parallel(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_all_edge_mmap(circuit(), q));
}

void edge_oracle_serial(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_all_edge_mmap_serial(circuit(), q));
}

void ub_parallel(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ub_scores(circuit(), q, q));
}

void ub_serial(benchmark::State& state) {
  const auto q = first_vars(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ub_scores_serial(circuit(), q, q));
}

}  // namespace

BENCHMARK(oracle_parallel)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(oracle_serial)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(edge_oracle_parallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(edge_oracle_serial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(ub_parallel)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(ub_serial)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
