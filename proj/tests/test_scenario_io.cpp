// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "pedsim/scenario.hpp"
#include "pedsim/scenario_io.hpp"

using namespace pedsim::scenario;
using pedsim::geom::Quat;
using pedsim::geom::Vec3;

namespace {

const char* kMinimalConfig = R"(# smallest useful scene
format = 1
name = mini
duration_frames = 60
fps = 30
seed = 7

[target goal_a]
position = (0, 0, 0)
area = plaza

[target goal_b]
position = (12, 3, 0)
area = plaza   # inline comment

[pedestrian walker]
spawn = (1, 1, 0)
controller = random
area = plaza

[camera cam0]
width = 640
height = 480
hfov_deg = 90
mount = static
position = (-5, 0, -3)
yaw_deg = 0
)";

bool has_code(const std::vector<Violation>& violations, ViolationCode code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

int line_of(const std::vector<Violation>& violations, ViolationCode code) {
  for (const auto& v : violations)
    if (v.code == code) return v.line;
  return -1;
}

Scenario awkward_scenario() {
  // Doubles chosen to expose any formatting round-trip loss.
  Scenario s;
  s.name = "round trip";
  s.duration_frames = 123;
  s.fps = 29.97;
  s.seed = 0xDEADBEEFCAFEBABEull;
  s.obstacles = {{"wall", {-0.1, 1.0 / 3.0, -2.5}, {0.3, 0.7, 0.0}}};
  s.paths = {{"loop_path",
              {{0, 0, 0}, {std::numbers::pi, 0.1, 0}, {3, -2, 0}},
              EndBehavior::kReverse}};
  s.target_points = {
      {"a0", {0.1, 0.2, 0}, "plaza", "", 0},
      {"a1", {5.5, -1.25, 0}, "plaza", "", 3},
      {"c0", {2, 2, 0}, "", "scripted", 1},
      {"c1", {1.0 / 7.0, 8, 0}, "", "scripted", 0},
  };
  PedestrianSpec rnd;
  rnd.name = "roamer";
  rnd.spawn = {0.25, -0.75, 0};
  rnd.height = 1.83;
  rnd.speed = 1.4;
  rnd.controller = RandomTargets{"plaza"};
  PedestrianSpec scripted;
  scripted.name = "scripted";
  scripted.spawn = {2, 8, 0};
  scripted.controller = CustomizedTargets{EndBehavior::kStop};
  PedestrianSpec tracked;
  tracked.name = "tracked";
  tracked.spawn = {0, 0, 0};
  tracked.controller = FollowPath{"loop_path", EndBehavior::kStop};
  s.pedestrians = {rnd, scripted, tracked};

  CameraSpec fixed;
  fixed.id = "overhead";
  fixed.intrinsics = pedsim::geom::make_intrinsics(1920, 1080, 1.2217304763960306);
  fixed.mount = StaticMount{
      {{-10, 0.5, -6}, Quat::from_yaw_pitch_roll(0.3, -0.45, 0.02)}};
  CameraSpec drone;
  drone.id = "drone";
  drone.intrinsics = pedsim::geom::make_intrinsics(640, 480, std::numbers::pi / 2);
  DroneMount dm;
  dm.waypoints = {{0, 0, -12}, {30, 0, -12}, {30, 30, -9}};
  dm.speed = 2.5;
  dm.look_at = Vec3{15, 15, 0};
  drone.mount = dm;
  CameraSpec ego;
  ego.id = "helmet";
  ego.intrinsics = pedsim::geom::make_intrinsics(1280, 720, 1.5);
  ego.mount = EgocentricMount{"roamer", {0.12, 0.0, -1.55}};
  s.cameras = {fixed, drone, ego};

  s.degradation.fog_extinction = 0.06;
  s.degradation.base_detect_prob = 0.97;
  s.degradation.night_factor = 0.55;
  s.degradation.bbox_noise_sigma = 0.04;
  s.degradation.false_positive_rate = 0.5;
  s.degradation.visibility_exponent = 1.5;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("scenario-io");

TEST_CASE("minimal config parses") {
  const ParseResult result = parse_scenario(kMinimalConfig);
  const std::string why =
      result.errors.empty() ? "no errors" : result.errors.front().str();
  REQUIRE_MESSAGE(result.ok(), why);
  const Scenario& s = *result.scenario;
  CHECK(s.name == "mini");
  CHECK(s.duration_frames == 60);
  CHECK(s.fps == 30.0);
  CHECK(s.seed == 7);
  REQUIRE(s.target_points.size() == 2);
  CHECK(s.target_points[1].position == Vec3{12, 3, 0});
  REQUIRE(s.pedestrians.size() == 1);
  CHECK(s.pedestrians[0].height == 1.7);  // default
  CHECK(std::holds_alternative<RandomTargets>(s.pedestrians[0].controller));
  REQUIRE(s.cameras.size() == 1);
  const auto& k = s.cameras[0].intrinsics;
  CHECK(k.fx == doctest::Approx(320.0));
  CHECK(k.cx == doctest::Approx(320.0));
  CHECK(k.cy == doctest::Approx(240.0));
  const auto* mount = std::get_if<StaticMount>(&s.cameras[0].mount);
  REQUIRE(mount != nullptr);
  CHECK(mount->pose.position == Vec3{-5, 0, -3});
}

TEST_CASE("syntax errors carry line numbers") {
  const auto result = parse_scenario("format = 1\nname = x\nbogus line\n");
  CHECK_FALSE(result.ok());
  CHECK(line_of(result.errors, ViolationCode::kSyntax) == 3);

  const auto unclosed = parse_scenario("format = 1\n[camera cam\n");
  CHECK(has_code(unclosed.errors, ViolationCode::kSyntax));
}

TEST_CASE("missing and unknown keys are reported") {
  std::string text(kMinimalConfig);
  text += "\n[camera cam1]\nwidth = 640\nmount = static\nposition = (0,0,-1)\n";
  const auto missing = parse_scenario(text);
  CHECK_FALSE(missing.ok());
  CHECK(has_code(missing.errors, ViolationCode::kMissingKey));

  text = kMinimalConfig;
  text += "\n[degradation]\nshininess = 3\n";
  const auto unknown = parse_scenario(text);
  CHECK_FALSE(unknown.ok());
  CHECK(has_code(unknown.errors, ViolationCode::kUnknownKey));
}

TEST_CASE("malformed values are reported with position") {
  std::string text(kMinimalConfig);
  text += "\n[obstacle box]\nmin = (0, 0)\nmax = (1, 1, 1)\n";
  const auto result = parse_scenario(text);
  CHECK_FALSE(result.ok());
  CHECK(has_code(result.errors, ViolationCode::kBadValue));
  const int line = line_of(result.errors, ViolationCode::kBadValue);
  CHECK(line > 0);
}

TEST_CASE("shape errors suppress semantic validation") {
  // The single-goal area would be a semantic violation, but the parse error
  // must surface alone so line numbers stay trustworthy.
  const auto result = parse_scenario(
      "format = 1\nname = x\nduration_frames = nope\n");
  CHECK_FALSE(result.ok());
  CHECK(has_code(result.errors, ViolationCode::kBadValue));
  CHECK_FALSE(result.scenario.has_value());
}

TEST_CASE("semantic violations flow through parse results") {
  // Parses cleanly, then the validator rejects the lone area goal.
  const auto result = parse_scenario(
      "format = 1\nname = x\nduration_frames = 10\n"
      "[target only]\nposition = (0,0,0)\narea = plaza\n"
      "[pedestrian p]\nspawn = (0,0,0)\ncontroller = random\narea = plaza\n");
  CHECK_FALSE(result.ok());
  CHECK(has_code(result.errors, ViolationCode::kInsufficientAreaGoals));
}

TEST_CASE("duplicate keys within a section are rejected") {
  std::string text(kMinimalConfig);
  text += "\n[obstacle box]\nmin = (0,0,-1)\nmin = (0,0,-2)\nmax = (1,1,0)\n";
  const auto result = parse_scenario(text);
  CHECK_FALSE(result.ok());
  CHECK(has_code(result.errors, ViolationCode::kSyntax));
}

TEST_CASE("unknown section kinds and controllers are rejected") {
  const auto bad_section = parse_scenario(
      "format = 1\nname = x\nduration_frames = 10\n[widget w]\nfoo = 1\n");
  CHECK(has_code(bad_section.errors, ViolationCode::kSyntax));

  std::string text(kMinimalConfig);
  text += "\n[pedestrian oddball]\nspawn = (0,0,0)\ncontroller = swim\n";
  const auto bad_ctl = parse_scenario(text);
  CHECK(has_code(bad_ctl.errors, ViolationCode::kBadValue));
}

TEST_CASE("format header is required") {
  const auto result = parse_scenario("name = x\nduration_frames = 10\n");
  CHECK(has_code(result.errors, ViolationCode::kMissingKey));
  const auto future = parse_scenario(
      "format = 2\nname = x\nduration_frames = 10\n");
  CHECK(has_code(future.errors, ViolationCode::kBadValue));
}

TEST_CASE("hfov accepts degrees or radians but not both") {
  std::string both(kMinimalConfig);
  both += "\n[camera cam1]\nwidth = 64\nheight = 48\nhfov_deg = 90\n"
          "hfov_rad = 1.57\nmount = static\nposition = (0,0,-1)\n";
  const auto result = parse_scenario(both);
  CHECK(has_code(result.errors, ViolationCode::kBadValue));
}

TEST_CASE("negative seeds wrap to unsigned") {
  const auto result = parse_scenario(
      "format = 1\nname = x\nduration_frames = 10\nseed = -1\n"
      "[target a]\nposition = (0,0,0)\narea = p\n"
      "[target b]\nposition = (1,0,0)\narea = p\n"
      "[pedestrian w]\nspawn = (0,0,0)\ncontroller = random\narea = p\n");
  REQUIRE(result.ok());
  CHECK(result.scenario->seed == 0xFFFFFFFFFFFFFFFFull);
}

TEST_CASE("canonical serialization round-trips exactly") {
  const Scenario original = awkward_scenario();
  REQUIRE(validate_scenario(original).empty());
  const std::string text = serialize_scenario(original);
  const ParseResult result = parse_scenario(text);
  const std::string why =
      result.errors.empty() ? "no errors" : result.errors.front().str();
  REQUIRE_MESSAGE(result.ok(), why);
  CHECK(*result.scenario == original);
  // Serializing again yields byte-identical text.
  CHECK(serialize_scenario(*result.scenario) == text);
}

TEST_CASE("degradation profiles parse standalone") {
  const auto result = parse_degradation_profile(
      "format = 1\n[degradation]\nfog_extinction = 0.02\n"
      "base_detect_prob = 0.97\nfalse_positive_rate = 0.3\n"
      "bbox_noise_sigma = 0.03\n");
  REQUIRE(result.ok());
  CHECK(result.spec->fog_extinction == 0.02);
  CHECK(result.spec->night_factor == 1.0);  // default

  const auto bad = parse_degradation_profile(
      "format = 1\n[degradation]\nnight_factor = 7\n");
  CHECK_FALSE(bad.ok());
  CHECK(has_code(bad.errors, ViolationCode::kBadRange));

  const auto none = parse_degradation_profile("format = 1\n");
  CHECK(has_code(none.errors, ViolationCode::kMissingKey));
}

TEST_CASE("file loading raises on missing files") {
  CHECK_THROWS_AS((void)parse_scenario_file("/nonexistent/nope.cfg"),
                  std::runtime_error);
  CHECK_THROWS_AS((void)parse_degradation_file("/nonexistent/nope.cfg"),
                  std::runtime_error);
}

TEST_SUITE_END();
