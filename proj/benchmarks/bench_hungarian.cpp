// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <vector>

#include <pedsim/hungarian.hpp>
#include <pedsim/random.hpp>

namespace {

std::vector<std::vector<double>> random_cost(int n, std::uint64_t seed) {
  pedsim::RngStream rng = pedsim::derive_stream(seed, "bench-hungarian");
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (auto& row : cost)
    for (auto& cell : row) cell = static_cast<double>(rng.next_below(1000));
  return cost;
}

void BM_HungarianSquare(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cost = random_cost(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pedsim::hungarian(cost));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_HungarianSquare)->Arg(8)->Arg(32)->Arg(128)->Complexity();

// The tracker-shaped case: a slim rectangular matrix with most pairs gated
// off, as produced by per-frame IoU association.
void BM_HungarianGated(benchmark::State& state) {
  const int tracks = static_cast<int>(state.range(0));
  pedsim::RngStream rng = pedsim::derive_stream(13, "bench-gated");
  std::vector<std::vector<double>> cost(
      tracks, std::vector<double>(tracks + 4, pedsim::kForbiddenCost));
  for (int i = 0; i < tracks; ++i) {
    cost[i][i] = rng.next_double();
    cost[i][(i + 1) % (tracks + 4)] = rng.next_double();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(pedsim::hungarian(cost));
  }
}
BENCHMARK(BM_HungarianGated)->Arg(10)->Arg(50);

}  // namespace
