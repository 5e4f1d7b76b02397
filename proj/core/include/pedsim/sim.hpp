// SPDX-License-Identifier: Apache-2.0
//
// Fixed-timestep world simulation. Pedestrians walk straight toward their
// active goal (no collision avoidance; crossings are legitimate occlusion
// events). Cameras are posed after pedestrians each tick, so egocentric
// views see the current-tick carrier pose.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pedsim/geometry.hpp"
#include "pedsim/random.hpp"
#include "pedsim/scenario.hpp"

namespace pedsim::sim {

using geom::Pose;
using geom::Vec3;
using scenario::PedestrianSpec;
using scenario::Scenario;

// A pedestrian that gets within this distance of its active goal has arrived
// and selects the next goal on that tick (without moving). Larger than any
// sane per-tick displacement, so arrivals never oscillate.
inline constexpr double kArrivalRadius = 0.25;  // meters

struct RandomModeState {
  int current_goal = -1;         // index into the area goal list
  std::uint64_t rng_state = 0;   // stream state after the last draw
  friend bool operator==(const RandomModeState&, const RandomModeState&) =
      default;
};

struct CustomizedModeState {
  int goal_cursor = 0;  // index into owned goals sorted by creation_index
  bool finished = false;
  friend bool operator==(const CustomizedModeState&,
                         const CustomizedModeState&) = default;
};

struct PathModeState {
  int segment_index = 0;     // vertex currently walked toward
  double arc_position = 0.0; // meters progressed toward that vertex
  int direction = 1;         // +1 forward, -1 backward (reverse behavior)
  bool finished = false;
  friend bool operator==(const PathModeState&, const PathModeState&) = default;
};

using ControllerState =
    std::variant<RandomModeState, CustomizedModeState, PathModeState>;

struct PedestrianState {
  std::string name;
  Vec3 position;
  double heading = 0.0;  // radians, world yaw toward the active goal
  ControllerState controller;
  friend bool operator==(const PedestrianState&, const PedestrianState&) =
      default;
};

struct CameraPoseSample {
  std::string id;
  Pose pose;
  friend bool operator==(const CameraPoseSample&, const CameraPoseSample&) =
      default;
};

struct Tick {
  int frame = 0;         // 0-based
  double timestamp_s = 0.0;  // frame / fps
  std::vector<PedestrianState> pedestrians;  // scenario declaration order
  std::vector<CameraPoseSample> cameras;     // scenario declaration order
  friend bool operator==(const Tick&, const Tick&) = default;
};

struct SimTrace {
  std::string scenario;
  double fps = 30.0;
  std::uint64_t seed = 0;
  std::vector<Tick> ticks;  // exactly duration_frames of them
  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

// Uniform goal selection excluding the goal just reached (exclude_index -1 =
// nothing excluded, used for the initial pick). goal_count >= 2 whenever
// exclude_index >= 0.
int pick_next_goal(RngStream& rng, int goal_count, int exclude_index);

// State at tick 0: spawn position, initial goal chosen, heading set. The
// random controller draws its first goal from `rng` here.
PedestrianState initial_pedestrian_state(const PedestrianSpec& spec,
                                         const Scenario& scenario,
                                         RngStream& rng);

// One tick: arrival check against the active goal first (arrival consumes
// the tick without moving), otherwise advance min(speed * dt, distance)
// straight toward it. `rng` feeds random-mode goal redraws only.
void step_pedestrian(PedestrianState& state, const PedestrianSpec& spec,
                     const Scenario& scenario, double dt, RngStream& rng);

// Camera pose at simulation time t. `current_pedestrians` holds this tick's
// already-stepped states (needed for egocentric mounts).
Pose camera_pose(const scenario::CameraMount& mount, double t,
                 const std::vector<PedestrianState>& current_pedestrians);

// Runs the whole scenario. Pure function of (scenario, seed): repeated calls
// return bit-identical traces. Throws std::invalid_argument when the
// scenario fails validation.
SimTrace run_simulation(const Scenario& scenario);

// Compact JSON round-trip for traces; doubles survive exactly.
std::string trace_to_json(const SimTrace& trace);
// Throws std::runtime_error on malformed input.
SimTrace trace_from_json(std::string_view text);

}  // namespace pedsim::sim
