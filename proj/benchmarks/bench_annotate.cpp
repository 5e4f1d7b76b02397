// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include <pedsim/annotate.hpp>
#include <pedsim/geometry.hpp>
#include <pedsim/scenario.hpp>
#include <pedsim/sim.hpp>

namespace {

using pedsim::geom::Vec3;

// A street-like standing scene: four boxes, six pedestrians, one camera.
pedsim::scenario::Scenario plaza() {
  pedsim::scenario::Scenario s;
  s.name = "bench";
  s.duration_frames = 1;
  s.fps = 30;
  s.obstacles = {
      {"wall_a", {-2.0, -9.5, -3.2}, {27.0, -8.2, 0.0}},
      {"wall_b", {-2.0, 8.2, -3.2}, {27.0, 9.5, 0.0}},
      {"kiosk", {10.0, -1.5, -2.4}, {12.0, 0.5, 0.0}},
      {"planter", {18.0, 4.2, -0.9}, {19.2, 5.4, 0.0}},
  };
  for (int p = 0; p < 6; ++p) {
    pedsim::scenario::PedestrianSpec ped;
    ped.name = "p" + std::to_string(p);
    ped.spawn = {4.0 + 3.0 * p, -6.0 + 2.5 * p, 0.0};
    ped.controller = pedsim::scenario::CustomizedTargets{};
    s.pedestrians.push_back(ped);
  }
  pedsim::scenario::CameraSpec cam;
  cam.id = "cam0";
  cam.intrinsics = pedsim::geom::make_intrinsics(1920, 1080, 1.5707963267948966);
  cam.mount = pedsim::scenario::StaticMount{
      {{-12.0, 0.0, -5.0},
       pedsim::geom::Quat::from_yaw_pitch_roll(0.0, -0.1831, 0.0)}};
  s.cameras.push_back(cam);
  return s;
}

pedsim::sim::Tick standing_tick(const pedsim::scenario::Scenario& s) {
  pedsim::sim::Tick tick;
  for (const auto& ped : s.pedestrians) {
    pedsim::sim::PedestrianState state;
    state.name = ped.name;
    state.position = ped.spawn;
    tick.pedestrians.push_back(state);
  }
  const auto& mount = std::get<pedsim::scenario::StaticMount>(
      s.cameras[0].mount);
  tick.cameras.push_back({"cam0", mount.pose});
  return tick;
}

void BM_ProjectAndVisibility(benchmark::State& state) {
  const auto s = plaza();
  const auto tick = standing_tick(s);
  const auto& cam = s.cameras[0];
  const auto& pose = tick.cameras[0].pose;
  for (auto _ : state) {
    for (const auto& ped_state : tick.pedestrians) {
      const auto* spec = s.find_pedestrian(ped_state.name);
      const auto proj = pedsim::annotate::project_pedestrian(
          {ped_state.position, spec->height, spec->radius}, pose,
          cam.intrinsics);
      std::vector<pedsim::annotate::Cylinder> others;
      for (const auto& other : tick.pedestrians) {
        if (other.name == ped_state.name) continue;
        const auto* os = s.find_pedestrian(other.name);
        others.push_back({other.position, os->height, os->radius});
      }
      benchmark::DoNotOptimize(pedsim::annotate::compute_visibility(
          proj, cam.intrinsics, pose, s.obstacles, others));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long long>(tick.pedestrians.size()));
}
BENCHMARK(BM_ProjectAndVisibility);

void BM_InstanceMask(benchmark::State& state) {
  const auto s = plaza();
  const auto tick = standing_tick(s);
  const int w = static_cast<int>(state.range(0));
  const int h = w * 9 / 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pedsim::annotate::render_instance_mask(s, tick, "cam0", w, h));
  }
  state.SetItemsProcessed(state.iterations() * w * h);
}
BENCHMARK(BM_InstanceMask)->Arg(240)->Arg(480);

}  // namespace

BENCHMARK_MAIN();
