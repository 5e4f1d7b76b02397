// SPDX-License-Identifier: Apache-2.0
//
// Declarative scenario description: world geometry, pedestrians and their
// trajectory controllers, cameras, detector degradation, timing. A Scenario
// is immutable after validation and safe to share across threads.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pedsim/geometry.hpp"

namespace pedsim::scenario {

using geom::CameraIntrinsics;
using geom::Pose;
using geom::Vec3;

// Axis-aligned box; proxy for world geometry, used for occlusion only.
struct Obstacle {
  std::string id;
  Vec3 min_corner;
  Vec3 max_corner;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

enum class EndBehavior { kLoop, kReverse, kStop };

const char* to_string(EndBehavior b);

// Polyline trajectory a pedestrian is forced to walk along.
struct ContinuousPath {
  std::string id;
  std::vector<Vec3> vertices;  // >= 2, consecutive separation > 1 cm
  EndBehavior end_behavior = EndBehavior::kLoop;

  friend bool operator==(const ContinuousPath&, const ContinuousPath&) = default;
};

// Discrete goal position. Points tagged with a pedestrian name belong to that
// pedestrian's customized route (visited in creation_index order); untagged
// points belong to the named area and feed random-mode selection.
struct TargetPoint {
  std::string id;
  Vec3 position;
  std::string area;
  std::string owner_tag;   // empty = area point
  int creation_index = 0;  // unique per owner_tag

  friend bool operator==(const TargetPoint&, const TargetPoint&) = default;
};

struct RandomTargets {
  std::string area;
  friend bool operator==(const RandomTargets&, const RandomTargets&) = default;
};

struct CustomizedTargets {
  EndBehavior end_behavior = EndBehavior::kLoop;  // loop | stop
  friend bool operator==(const CustomizedTargets&, const CustomizedTargets&) =
      default;
};

struct FollowPath {
  std::string path_id;
  // Overrides the path's own end behavior when set.
  std::optional<EndBehavior> end_override;
  friend bool operator==(const FollowPath&, const FollowPath&) = default;
};

using Controller = std::variant<RandomTargets, CustomizedTargets, FollowPath>;

struct PedestrianSpec {
  std::string name;  // unique
  Vec3 spawn;
  double height = 1.7;  // meters, [1.4, 2.1]
  double radius = 0.3;  // meters
  double speed = 1.4;   // m/s, > 0
  Controller controller;

  friend bool operator==(const PedestrianSpec&, const PedestrianSpec&) = default;
};

struct StaticMount {
  Pose pose;
  friend bool operator==(const StaticMount&, const StaticMount&) = default;
};

// Drone flying constant-speed piecewise-linear waypoints, clamped at the end.
// Aim: either a fixed look-at point, or fixed pitch with yaw along travel.
struct DroneMount {
  std::vector<Vec3> waypoints;  // >= 2
  double speed = 1.0;           // m/s
  std::optional<Vec3> look_at;
  double fixed_pitch_rad = 0.0;
  friend bool operator==(const DroneMount&, const DroneMount&) = default;
};

struct EgocentricMount {
  std::string pedestrian;
  Vec3 eye_offset{0.1, 0.0, -1.6};  // body frame: forward, right, down
  friend bool operator==(const EgocentricMount&, const EgocentricMount&) =
      default;
};

using CameraMount = std::variant<StaticMount, DroneMount, EgocentricMount>;

struct CameraSpec {
  std::string id;
  CameraIntrinsics intrinsics;
  CameraMount mount;

  friend bool operator==(const CameraSpec&, const CameraSpec&) = default;
};

// Synthetic detector degradation. Detection probability per annotated
// pedestrian: base * night * visibility^exponent * exp(-fog * distance).
struct DegradationSpec {
  double fog_extinction = 0.0;       // 1/m, >= 0
  double base_detect_prob = 1.0;     // [0, 1]
  double night_factor = 1.0;         // [0, 1]
  double bbox_noise_sigma = 0.0;     // fraction of box size, >= 0
  double false_positive_rate = 0.0;  // expected FPs per frame, >= 0
  double visibility_exponent = 1.0;  // >= 0

  friend bool operator==(const DegradationSpec&, const DegradationSpec&) =
      default;
};

struct Scenario {
  std::string name;
  int duration_frames = 0;
  double fps = 30.0;
  std::uint64_t seed = 0;
  std::vector<Obstacle> obstacles;
  std::vector<ContinuousPath> paths;
  std::vector<TargetPoint> target_points;
  std::vector<PedestrianSpec> pedestrians;
  std::vector<CameraSpec> cameras;
  DegradationSpec degradation;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  const ContinuousPath* find_path(const std::string& id) const;
  const PedestrianSpec* find_pedestrian(const std::string& name) const;
  const CameraSpec* find_camera(const std::string& id) const;

  // Target points of an area / owned by a pedestrian, in stable order
  // (declaration order for areas, creation_index for owners). Indices into
  // target_points.
  std::vector<int> area_goal_indices(const std::string& area) const;
  std::vector<int> owned_goal_indices(const std::string& pedestrian) const;
};

enum class ViolationCode {
  kSyntax,
  kBadValue,
  kMissingKey,
  kUnknownKey,
  kDuplicateName,
  kDanglingReference,
  kNoGoals,
  kInsufficientAreaGoals,
  kBadRange,
  kDegenerateGeometry,
};

const char* to_string(ViolationCode code);

struct Violation {
  ViolationCode code = ViolationCode::kSyntax;
  std::string subject;  // entity or key the violation is about
  std::string message;
  int line = 0;    // 1-based source line for parse-time violations, else 0
  int column = 0;  // 1-based, parse-time only

  std::string str() const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Deterministic, order-stable semantic validation. Empty result = valid.
// Checks every invariant; does not stop at the first violation.
std::vector<Violation> validate_scenario(const Scenario& s);

// Range checks for a degradation spec alone (also used for profile files).
std::vector<Violation> validate_degradation(const DegradationSpec& d);

}  // namespace pedsim::scenario
