// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pedsim/scenario.hpp"

using namespace pedsim::scenario;
using pedsim::geom::Quat;

namespace {

Scenario base_scenario() {
  Scenario s;
  s.name = "unit";
  s.duration_frames = 10;
  s.fps = 30.0;
  s.seed = 42;
  s.target_points = {
      {"goal_a", {0, 0, 0}, "plaza", "", 0},
      {"goal_b", {10, 0, 0}, "plaza", "", 1},
  };
  PedestrianSpec ped;
  ped.name = "walker";
  ped.spawn = {1, 1, 0};
  ped.controller = RandomTargets{"plaza"};
  s.pedestrians = {ped};
  CameraSpec cam;
  cam.id = "cam0";
  cam.intrinsics = pedsim::geom::make_intrinsics(640, 480, std::numbers::pi / 2);
  cam.mount = StaticMount{{{-5, 0, -3}, Quat::identity()}};
  s.cameras = {cam};
  return s;
}

bool has_code(const std::vector<Violation>& violations, ViolationCode code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("well-formed scenario validates cleanly") {
  CHECK(validate_scenario(base_scenario()).empty());
}

TEST_CASE("header fields are range checked") {
  auto s = base_scenario();
  s.name = "";
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadValue));
  s = base_scenario();
  s.name = "bad#name";
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadValue));
  s = base_scenario();
  s.duration_frames = 0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
  s = base_scenario();
  s.fps = 0.0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
}

TEST_CASE("duplicate names are reported once per name") {
  auto s = base_scenario();
  s.obstacles = {{"wall", {0, 0, -2}, {1, 1, 0}},
                 {"wall", {5, 5, -2}, {6, 6, 0}},
                 {"wall", {9, 9, -2}, {10, 10, 0}}};
  const auto violations = validate_scenario(s);
  CHECK(std::count_if(violations.begin(), violations.end(),
                      [](const Violation& v) {
                        return v.code == ViolationCode::kDuplicateName;
                      }) == 1);
}

TEST_CASE("obstacle corners must be strictly ordered") {
  auto s = base_scenario();
  s.obstacles = {{"flat", {0, 0, 0}, {1, 1, 0}}};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDegenerateGeometry));
  s.obstacles = {{"ok", {0, 0, -2}, {1, 1, 0}}};
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("paths need spaced vertices") {
  auto s = base_scenario();
  s.paths = {{"stub", {{0, 0, 0}}, EndBehavior::kLoop}};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDegenerateGeometry));
  s.paths = {{"tight", {{0, 0, 0}, {0.005, 0, 0}}, EndBehavior::kLoop}};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDegenerateGeometry));
  s.paths = {{"fine", {{0, 0, 0}, {1, 0, 0}}, EndBehavior::kLoop}};
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("owned target points need unique indices and a real owner") {
  auto s = base_scenario();
  s.target_points.push_back({"stop_1", {2, 2, 0}, "", "walker", 0});
  s.target_points.push_back({"stop_2", {3, 3, 0}, "", "walker", 0});
  CHECK(has_code(validate_scenario(s), ViolationCode::kDuplicateName));

  s = base_scenario();
  s.target_points.push_back({"stray", {2, 2, 0}, "", "nobody", 0});
  CHECK(has_code(validate_scenario(s), ViolationCode::kDanglingReference));

  // Same index under different owners is fine.
  s = base_scenario();
  PedestrianSpec second;
  second.name = "runner";
  second.spawn = {0, 5, 0};
  second.controller = CustomizedTargets{};
  s.pedestrians.push_back(second);
  s.target_points.push_back({"stop_w", {2, 2, 0}, "", "walker", 0});
  s.target_points.push_back({"stop_r", {3, 3, 0}, "", "runner", 0});
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("pedestrian physical ranges") {
  auto s = base_scenario();
  s.pedestrians[0].height = 1.0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
  s = base_scenario();
  s.pedestrians[0].height = 2.2;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
  s = base_scenario();
  s.pedestrians[0].radius = 0.0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
  s = base_scenario();
  s.pedestrians[0].speed = -1.0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
  s = base_scenario();
  s.pedestrians[0].spawn.x = std::nan("");
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadValue));
}

TEST_CASE("random mode needs at least two area goals") {
  auto s = base_scenario();
  s.target_points.pop_back();
  CHECK(has_code(validate_scenario(s), ViolationCode::kInsufficientAreaGoals));
  s = base_scenario();
  s.pedestrians[0].controller = RandomTargets{"elsewhere"};
  CHECK(has_code(validate_scenario(s), ViolationCode::kInsufficientAreaGoals));
}

TEST_CASE("customized mode needs owned goals") {
  auto s = base_scenario();
  s.pedestrians[0].controller = CustomizedTargets{};
  CHECK(has_code(validate_scenario(s), ViolationCode::kNoGoals));
  s.target_points.push_back({"stop_1", {2, 2, 0}, "", "walker", 0});
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("path mode needs an existing path") {
  auto s = base_scenario();
  s.pedestrians[0].controller = FollowPath{"ghost", {}};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDanglingReference));
  s.paths = {{"ghost", {{0, 0, 0}, {5, 0, 0}}, EndBehavior::kStop}};
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("camera mounts are checked") {
  auto s = base_scenario();
  s.cameras[0].intrinsics = {};
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));

  s = base_scenario();
  s.cameras[0].mount = DroneMount{{{0, 0, -10}}, 2.0, {}, 0.0};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDegenerateGeometry));

  s = base_scenario();
  s.cameras[0].mount = DroneMount{{{0, 0, -10}, {20, 0, -10}}, 0.0, {}, 0.0};
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));

  s = base_scenario();
  s.cameras[0].mount = EgocentricMount{"nobody", {0.1, 0, -1.6}};
  CHECK(has_code(validate_scenario(s), ViolationCode::kDanglingReference));

  s = base_scenario();
  s.cameras[0].mount = EgocentricMount{"walker", {0.1, 0, -1.6}};
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("degradation ranges") {
  DegradationSpec d;
  CHECK(validate_degradation(d).empty());
  d.fog_extinction = -0.1;
  CHECK_FALSE(validate_degradation(d).empty());
  d = {};
  d.base_detect_prob = 1.5;
  CHECK_FALSE(validate_degradation(d).empty());
  d = {};
  d.night_factor = -0.5;
  CHECK_FALSE(validate_degradation(d).empty());
  d = {};
  d.bbox_noise_sigma = -1.0;
  CHECK_FALSE(validate_degradation(d).empty());
  d = {};
  d.false_positive_rate = -2.0;
  CHECK_FALSE(validate_degradation(d).empty());
  d = {};
  d.visibility_exponent = -1.0;
  CHECK_FALSE(validate_degradation(d).empty());

  auto s = base_scenario();
  s.degradation.night_factor = 2.0;
  CHECK(has_code(validate_scenario(s), ViolationCode::kBadRange));
}

TEST_CASE("lookup helpers") {
  const auto s = base_scenario();
  CHECK(s.find_pedestrian("walker") != nullptr);
  CHECK(s.find_pedestrian("ghost") == nullptr);
  CHECK(s.find_camera("cam0") != nullptr);
  CHECK(s.find_camera("cam9") == nullptr);
  CHECK(s.find_path("any") == nullptr);
}

TEST_CASE("goal index ordering") {
  auto s = base_scenario();
  s.target_points = {
      {"p0", {0, 0, 0}, "plaza", "", 0},
      {"w2", {1, 0, 0}, "", "walker", 2},
      {"p1", {2, 0, 0}, "plaza", "", 0},
      {"w0", {3, 0, 0}, "", "walker", 0},
      {"q0", {4, 0, 0}, "yard", "", 0},
      {"w1", {5, 0, 0}, "", "walker", 1},
  };
  // Areas keep declaration order and skip owned points.
  CHECK(s.area_goal_indices("plaza") == std::vector<int>{0, 2});
  CHECK(s.area_goal_indices("yard") == std::vector<int>{4});
  CHECK(s.area_goal_indices("nowhere").empty());
  // Owned goals come back sorted by creation index.
  CHECK(s.owned_goal_indices("walker") == std::vector<int>{3, 5, 1});
  CHECK(s.owned_goal_indices("ghost").empty());
}

TEST_CASE("violation formatting") {
  const Violation v{ViolationCode::kBadValue, "walker", "speed out of range",
                    12, 7};
  const std::string text = v.str();
  CHECK(text.find("bad-value") != std::string::npos);
  CHECK(text.find("line 12") != std::string::npos);
  CHECK(text.find("walker") != std::string::npos);
  CHECK(text.find("speed out of range") != std::string::npos);
}

TEST_SUITE_END();
