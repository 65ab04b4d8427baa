// Microbenchmarks for the hot kernels: the OpenMP matrix-vector product
// against its serial reference, graph sampling, and the two eigensolver
// entry points used by every sweep trial.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "specbm/eigensolver.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/sbm.hpp"
#include "specbm/sym_matrix.hpp"

namespace {

using namespace specbm;

SampledGraph make_graph(int n) {
  return sample(SbmParams::critical(n, 10.0, 2.0), 42);
}

std::vector<double> make_x(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = (i % 7) * 0.25 - 0.75;
  return x;
}

void BM_SymvParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampledGraph g = make_graph(n);
  const std::vector<double> x = make_x(n);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (auto _ : state) {
    g.adjacency.symv(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SymvParallel)->Arg(512)->Arg(1024)->Arg(2048)->Arg(4096);

void BM_SymvSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampledGraph g = make_graph(n);
  const std::vector<double> x = make_x(n);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (auto _ : state) {
    g.adjacency.symv_serial(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SymvSerial)->Arg(512)->Arg(1024)->Arg(2048)->Arg(4096);

void BM_SampleGraph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SbmParams params = SbmParams::critical(n, 10.0, 2.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SampledGraph g = sample(params, ++seed);
    benchmark::DoNotOptimize(g.adjacency.n());
  }
}
BENCHMARK(BM_SampleGraph)->Arg(1000)->Arg(2000)->Arg(5000);

void BM_LaplacianSmallest3(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampledGraph g = make_graph(n);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  EigOptions opts;
  opts.dense_cutoff = 384;  // force the Lanczos path at these sizes
  opts.kernel_hint = std::vector<double>(static_cast<std::size_t>(n), 1.0);
  for (auto _ : state) {
    Spectrum s = smallest_k(L, 3, opts);
    benchmark::DoNotOptimize(s.eigenvalues.data());
  }
}
BENCHMARK(BM_LaplacianSmallest3)->Arg(600)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PencilSmallest2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampledGraph g = make_graph(n);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  const std::vector<double> d = g.adjacency.row_sums();
  EigOptions opts;
  opts.dense_cutoff = 384;
  opts.kernel_hint = std::vector<double>(static_cast<std::size_t>(n), 1.0);
  for (auto _ : state) {
    Spectrum s = generalized_smallest_k(L, d, 2, opts);
    benchmark::DoNotOptimize(s.eigenvalues.data());
  }
}
BENCHMARK(BM_PencilSmallest2)->Arg(600)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
