// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <pedsim/bbox.hpp>
#include <pedsim/detect.hpp>
#include <pedsim/random.hpp>
#include <pedsim/track.hpp>

namespace {

// Ten walkers drifting across a 1080p frame with mild jitter and a 5%
// dropout rate, about what a shipped scenario produces.
pedsim::detect::DetectionSet drifting_detections(int frames) {
  pedsim::RngStream rng = pedsim::derive_stream(3, "bench-track");
  pedsim::detect::DetectionSet detections;
  for (int f = 0; f < frames; ++f) {
    for (int p = 0; p < 10; ++p) {
      if (rng.next_double() < 0.05) continue;
      const double x = 60.0 + 17.0 * p + 1.5 * f + rng.gaussian() * 0.8;
      const double y = 200.0 + 60.0 * p + 0.3 * f + rng.gaussian() * 0.8;
      detections.push_back(
          {f, {x, y, x + 60.0, y + 120.0}, 0.9});
    }
  }
  return detections;
}

void BM_TrackIou(benchmark::State& state) {
  const auto detections = drifting_detections(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pedsim::track::track_iou(detections));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long long>(detections.size()));
}
BENCHMARK(BM_TrackIou)->Arg(100)->Arg(900);

void BM_TrackKalman(benchmark::State& state) {
  const auto detections = drifting_detections(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pedsim::track::track_kalman(detections));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long long>(detections.size()));
}
BENCHMARK(BM_TrackKalman)->Arg(100)->Arg(900);

}  // namespace
