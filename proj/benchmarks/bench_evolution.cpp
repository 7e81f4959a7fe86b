#include <numbers>

#include <benchmark/benchmark.h>

#include "momgraph/builtins.hpp"
#include "momgraph/evolution.hpp"

using namespace momgraph;

namespace {

// Route count through the loop grows linearly with a, so does the cost.
void BM_EvolveAtLoopLine(benchmark::State& state) {
  const auto op = loop_line(1.0, hadamard2());
  const WavePacket psi{{bump(edge_id(0), -0.75, -0.25)}};
  const double a = static_cast<double>(state.range(0)) + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_at(op, psi, a, {edge_id(2), 0.3}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvolveAtLoopLine)->RangeMultiplier(4)->Range(1, 256)->Complexity();

// Route count on the two-loop graph grows exponentially with a.
void BM_EvolveAtTwoLoop(benchmark::State& state) {
  const auto op = two_loop({1.0, std::numbers::sqrt2, std::numbers::sqrt3 - 1.0});
  const WavePacket psi{{bump(edge_id(0), -0.9, -0.1)}};
  const double a = static_cast<double>(state.range(0)) + 0.0731;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_at(op, psi, a, {edge_id(4), 0.5537}));
}
BENCHMARK(BM_EvolveAtTwoLoop)->DenseRange(2, 14, 4);

void BM_EvolveNormStar(benchmark::State& state) {
  const auto op = star(3, fourier_matrix(3));
  const auto psi = normalized({{bump(edge_id(0), -1.5, -0.5)}});
  for (auto _ : state) benchmark::DoNotOptimize(packet_norm(evolve(op, psi, 1.2)));
}
BENCHMARK(BM_EvolveNormStar);

void BM_EvolveGrid(benchmark::State& state) {
  const auto op = two_loop({1.0, std::numbers::sqrt2, std::numbers::sqrt3 - 1.0});
  const WavePacket psi{{bump(edge_id(0), -0.9, -0.1)}};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_grid(op, psi, 2.5, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_EvolveGrid)->Arg(16)->Arg(64);

}  // namespace
