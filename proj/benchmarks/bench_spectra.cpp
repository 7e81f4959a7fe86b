#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "momgraph/builtins.hpp"
#include "momgraph/orientation.hpp"
#include "momgraph/spectra.hpp"
#include "momgraph/two_loop.hpp"

using namespace momgraph;

namespace {

MomentumOperator ring(std::size_t n) {
  std::vector<double> lengths(n), alpha(n);
  for (std::size_t j = 0; j < n; ++j) {
    lengths[j] = 1.0 + 0.37 * std::sin(1.3 * static_cast<double>(j) + 0.2);
    alpha[j] = 0.1 * static_cast<double>(j);
  }
  return loop_operator(lengths, alpha);
}

void BM_RealSpectrumFigureEight(benchmark::State& state) {
  const SecularSystem s(figure_eight(1.0, std::numbers::sqrt2, hadamard2()));
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(real_spectrum(s, lambda));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RealSpectrumFigureEight)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_RealSpectrumRing(benchmark::State& state) {
  const SecularSystem s(ring(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(real_spectrum(s, 50.0));
}
BENCHMARK(BM_RealSpectrumRing)->DenseRange(2, 10, 4);

void BM_CountingFunction(benchmark::State& state) {
  const SecularSystem s(two_loop_compact({1.0, 1.0, 2.0}, 3.0));
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counting_function(s, lambda));
}
BENCHMARK(BM_CountingFunction)->RangeMultiplier(10)->Range(10, 10000);

void BM_EmbeddedTwoLoop(benchmark::State& state) {
  const auto op = two_loop({1.0, 1.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(embedded_eigenvalues(op, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_EmbeddedTwoLoop)->Arg(10)->Arg(40);

void BM_Resonances(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(resonances(1.0, 0.05, 1, 5));
}
BENCHMARK(BM_Resonances);

void BM_Orient(benchmark::State& state) {
  // k parallel-edge cycles through a common hub: every degree is even
  const auto k = static_cast<std::size_t>(state.range(0));
  UndirectedMetricGraph g{2 * k + 1, {}, {}};
  for (std::size_t c = 0; c < k; ++c) {
    const auto a = vertex_id(1 + 2 * c), b = vertex_id(2 + 2 * c);
    g.edges.push_back({edge_id(3 * c), vertex_id(0), a, 1.0});
    g.edges.push_back({edge_id(3 * c + 1), a, b, 1.0});
    g.edges.push_back({edge_id(3 * c + 2), b, vertex_id(0), 1.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(orient(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Orient)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

}  // namespace
