// SPDX-License-Identifier: Apache-2.0
//
// Text config format for scenarios. Line oriented, versioned:
//
//   format = 1                      # required header, first non-comment line
//   name = street_day
//   duration_frames = 500
//   fps = 30                        # optional, default 30
//   seed = 42                       # optional, default 0
//
//   [obstacle wall_east]            # sections: [kind id]
//   min = (10, 5, -3)               # Vec3 literals: (north, east, down)
//   max = (12, 25, 0)
//
//   [path sidewalk]
//   vertices = (0,0,0) (10,0,0)     # whitespace-separated Vec3 list
//   end = loop                      # loop | reverse | stop
//
//   [target t1]
//   position = (3, 4, 0)
//   area = plaza                    # area points: no owner
//   owner = alice                   # owned points: visited by creation index
//   index = 1
//
//   [pedestrian alice]
//   spawn = (0, 0, 0)
//   height = 1.7                    # optional; [1.4, 2.1]
//   radius = 0.3                    # optional
//   speed = 1.4                     # optional, m/s
//   controller = customized         # random | customized | path
//   area = plaza                    # random mode only
//   path = sidewalk                 # path mode only
//   end = loop                      # optional end-behavior (override)
//
//   [camera cam0]
//   width = 1920
//   height = 1080
//   hfov_deg = 90                   # or hfov_rad
//   mount = static                  # static | drone | ego
//   position = (0, 0, -8)           # static only
//   yaw_deg = 0 / pitch_deg = -30 / roll_deg = 0   # or quaternion = (w,x,y,z)
//   waypoints = (..) (..)           # drone only
//   speed = 2                       # drone only
//   look_at = (x, y, z)             # drone aim; else pitch_deg fixed
//   pedestrian = alice              # ego only
//   eye_offset = (0.1, 0, -1.6)     # ego only, body frame
//
//   [degradation]                   # optional, singleton
//   fog_extinction = 0.0
//   base_detect_prob = 1.0
//   night_factor = 1.0
//   bbox_noise_sigma = 0.0
//   false_positive_rate = 0.0
//   visibility_exponent = 1.0
//
// '#' starts a comment anywhere on a line. Parsing collects the complete
// list of violations instead of stopping at the first.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedsim/scenario.hpp"

namespace pedsim::scenario {

struct ParseResult {
  // Set only when `errors` is empty; then satisfies every Scenario invariant.
  std::optional<Scenario> scenario;
  std::vector<Violation> errors;

  bool ok() const { return scenario.has_value(); }
};

ParseResult parse_scenario(std::string_view text);

// Reads and parses a .cfg file. Throws std::runtime_error on I/O failure.
ParseResult parse_scenario_file(const std::string& path);

// Canonical text form: fixed section and key order, exact double round-trip
// (angles serialized in radians, orientations as quaternions).
// parse_scenario(serialize_scenario(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& s);

// Degradation-only document: a `format = 1` header plus one [degradation]
// section. Used for custom detector profiles on the command line.
struct DegradationParseResult {
  std::optional<DegradationSpec> spec;
  std::vector<Violation> errors;
  bool ok() const { return spec.has_value(); }
};

DegradationParseResult parse_degradation_profile(std::string_view text);
DegradationParseResult parse_degradation_file(const std::string& path);

}  // namespace pedsim::scenario
